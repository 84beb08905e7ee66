#include "vcpc/io.hpp"

#include <charconv>
#include <limits>

namespace vcpc {

ParseError::ParseError(std::size_t line, const std::string& detail)
    : std::runtime_error("ParseError(line " + std::to_string(line) + "): " + detail), line_(line) {}

ValidationError::ValidationError(std::size_t line, const TreeError& cause)
    : std::runtime_error("ValidationError(line " + std::to_string(line) + "): " + cause.what()),
      line_(line),
      cause_(cause.kind()) {}

namespace {

std::uint64_t as_vertex_label(const Json& v, std::size_t line, const char* what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  }
  throw ParseError(line, std::string(what) + " must be a nonnegative integer, got " + v.dump());
}

std::uint64_t parse_key(const std::string& key, std::size_t line) {
  std::uint64_t value = 0;
  const char* end = key.data() + key.size();
  auto [ptr, ec] = std::from_chars(key.data(), end, value);
  if (key.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, "color key \"" + key + "\" is not a vertex id");
  }
  return value;
}

Color as_color(const Json& v, std::size_t line, const ColorTable* table) {
  if (v.is_string()) {
    if (table == nullptr) throw ParseError(line, "color name " + v.dump() + " given without a color table");
    auto it = table->find(v.get<std::string>());
    if (it == table->end()) throw ParseError(line, "color name " + v.dump() + " missing from the color table");
    return it->second;
  }
  const std::uint64_t c = as_vertex_label(v, line, "color");
  if (c > std::numeric_limits<Color>::max()) throw ParseError(line, "color " + v.dump() + " out of range");
  return static_cast<Color>(c);
}

}  // namespace

ColorTable load_color_table(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(0, std::string("color table: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, "color table must be a JSON object");
  ColorTable table;
  for (const auto& [name, value] : j.items()) table.emplace(name, as_color(value, 0, nullptr));
  return table;
}

TreeRecord parse_tree_line(const std::string& text, std::size_t line, const ColorTable* table) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(line, e.what());
  }
  if (!j.is_object()) throw ParseError(line, "record must be a JSON object");
  if (!j.contains("edges")) throw ParseError(line, "missing \"edges\"");
  if (!j.contains("colors")) throw ParseError(line, "missing \"colors\"");
  const Json& jedges = j["edges"];
  const Json& jcolors = j["colors"];
  if (!jedges.is_array()) throw ParseError(line, "\"edges\" must be an array");
  if (!jcolors.is_object()) throw ParseError(line, "\"colors\" must be an object");

  std::string id;
  if (auto it = j.find("id"); it != j.end() && !it->is_null()) {
    id = it->is_string() ? it->get<std::string>() : it->dump();
  } else {
    id = std::to_string(line);
  }

  std::vector<InputEdge> edges;
  edges.reserve(jedges.size());
  for (const Json& e : jedges) {
    if (!e.is_array() || e.size() != 2) throw ParseError(line, "edge " + e.dump() + " must be [parent, child]");
    edges.push_back({as_vertex_label(e[0], line, "edge endpoint"), as_vertex_label(e[1], line, "edge endpoint")});
  }
  std::map<std::uint64_t, Color> colors;
  for (const auto& [key, value] : jcolors.items()) colors.emplace(parse_key(key, line), as_color(value, line, table));

  try {
    ColoredArborescence tree = build_tree(edges, colors);
    if (auto it = j.find("root"); it != j.end() && !it->is_null()) {
      const std::uint64_t declared = as_vertex_label(*it, line, "root");
      if (declared != tree.original_id(tree.root())) {
        throw TreeError(TreeErrorKind::MultipleRoots, "declared root " + std::to_string(declared) +
                                                          " but vertex " + std::to_string(tree.original_id(tree.root())) +
                                                          " has in-degree 0");
      }
    }
    return TreeRecord{std::move(id), std::move(tree), line};
  } catch (const TreeError& e) {
    throw ValidationError(line, e);
  }
}

std::optional<TreeRecord> CorpusReader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    return parse_tree_line(text, line_, table_);
  }
  return std::nullopt;
}

std::vector<TreeRecord> parse_corpus(std::istream& in, const ColorTable* table) {
  std::vector<TreeRecord> out;
  CorpusReader reader(in, table);
  while (auto rec = reader.next()) out.push_back(std::move(*rec));
  return out;
}

Json tree_to_json(const ColoredArborescence& tree, const std::string& id) {
  Json j;
  j["id"] = id;
  j["root"] = tree.original_id(tree.root());
  Json edges = Json::array();
  for (auto [p, c] : tree.edges()) edges.push_back({tree.original_id(p), tree.original_id(c)});
  j["edges"] = std::move(edges);
  Json colors = Json::object();
  for (VertexId v = 0; v < tree.size(); ++v) colors[std::to_string(tree.original_id(v))] = tree.color(v);
  j["colors"] = std::move(colors);
  return j;
}

Json vcpc_to_json(const Vcpc& code, const std::optional<std::string>& id) {
  Json j;
  if (id) j["id"] = *id;
  Json parents = Json::array();
  for (const auto& p : code.parents) {
    if (p) {
      parents.push_back(*p);
    } else {
      parents.push_back(nullptr);
    }
  }
  j["parents"] = std::move(parents);
  j["colors"] = code.colors;
  j["n"] = code.size();
  return j;
}

Vcpc vcpc_from_json(const Json& j, std::size_t line) {
  if (!j.is_object()) throw ParseError(line, "code must be a JSON object");
  if (!j.contains("parents") || !j["parents"].is_array()) throw ParseError(line, "missing \"parents\" array");
  if (!j.contains("colors") || !j["colors"].is_array()) throw ParseError(line, "missing \"colors\" array");
  Vcpc code;
  for (const Json& p : j["parents"]) {
    if (p.is_null()) {
      code.parents.emplace_back(std::nullopt);
    } else {
      const std::uint64_t v = as_vertex_label(p, line, "parent label");
      if (v > std::numeric_limits<Label>::max()) throw ParseError(line, "parent label " + p.dump() + " out of range");
      code.parents.emplace_back(static_cast<Label>(v));
    }
  }
  for (const Json& c : j["colors"]) code.colors.push_back(as_color(c, line, nullptr));
  if (auto it = j.find("n"); it != j.end()) {
    if (as_vertex_label(*it, line, "n") != code.colors.size()) {
      throw ParseError(line, "\"n\" is " + it->dump() + " but the colors row has " +
                                 std::to_string(code.colors.size()) + " entries");
    }
  }
  return code;
}

Json full_ld_to_json(const FullLdArray& full) {
  Json j = Json::array();
  for (const auto& row : full.rows) j.push_back(row);
  return j;
}

FullLdArray full_ld_from_json(const Json& j, std::size_t line) {
  if (!j.is_array()) throw ParseError(line, "descriptor must be an array of arrays");
  FullLdArray full;
  for (const Json& row : j) {
    if (!row.is_array()) throw ParseError(line, "descriptor row " + row.dump() + " is not an array");
    ColorList colors;
    for (const Json& c : row) colors.push_back(as_color(c, line, nullptr));
    full.rows.push_back(std::move(colors));
  }
  return full;
}

std::string dump_line(const Json& j) { return j.dump(); }

}  // namespace vcpc
