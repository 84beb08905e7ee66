#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcpc/canonical.hpp"
#include "vcpc/codec.hpp"
#include "vcpc/tree.hpp"

namespace vcpc {

using Json = nlohmann::ordered_json;

/// Human-readable color names mapped to their integer colors.
using ColorTable = std::map<std::string, Color>;

/// Malformed JSON or a schema violation on a given input line (1-based).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& detail);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed record that does not describe a valid arborescence.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::size_t line, const TreeError& cause);
  std::size_t line() const noexcept { return line_; }
  TreeErrorKind cause() const noexcept { return cause_; }

 private:
  std::size_t line_;
  TreeErrorKind cause_;
};

struct TreeRecord {
  std::string id;
  ColoredArborescence tree;
  std::size_t line = 0;
};

/// Reads a JSON object mapping color names to nonnegative integers.
ColorTable load_color_table(std::istream& in);

/// Parses one corpus line. `line` is used for diagnostics and as the default id.
TreeRecord parse_tree_line(const std::string& text, std::size_t line, const ColorTable* table = nullptr);

/// Streams trees from a JSONL corpus, one record per nonblank line.
class CorpusReader {
 public:
  explicit CorpusReader(std::istream& in, const ColorTable* table = nullptr) : in_(in), table_(table) {}

  /// Next record, or nullopt at end of input. Throws ParseError / ValidationError.
  std::optional<TreeRecord> next();

 private:
  std::istream& in_;
  const ColorTable* table_;
  std::size_t line_ = 0;
};

std::vector<TreeRecord> parse_corpus(std::istream& in, const ColorTable* table = nullptr);

/// {"id", "root", "edges", "colors"} using the original vertex ids.
Json tree_to_json(const ColoredArborescence& tree, const std::string& id);

/// {"id"?, "parents", "colors", "n"} with the empty parent written as null.
Json vcpc_to_json(const Vcpc& code, const std::optional<std::string>& id = std::nullopt);

/// Reads the layout written by vcpc_to_json. Only the JSON shape is checked
/// here; use validate_code for the code invariants.
Vcpc vcpc_from_json(const Json& j, std::size_t line = 0);

Json full_ld_to_json(const FullLdArray& full);
FullLdArray full_ld_from_json(const Json& j, std::size_t line = 0);

/// Compact single-line dump used for every JSONL record.
std::string dump_line(const Json& j);

}  // namespace vcpc
