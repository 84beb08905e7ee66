#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vcpc/canonical.hpp"
#include "vcpc/tree.hpp"

namespace vcpc {

using Label = std::uint32_t;

/// Vertex-colored Prüfer code: a 2 x n array. parents[i] is the canonical
/// label of the parent of the i-th pruned vertex, colors[i] its color. The
/// last column belongs to the root and holds the empty parent (nullopt).
struct Vcpc {
  std::vector<std::optional<Label>> parents;
  std::vector<Color> colors;

  std::size_t size() const noexcept { return colors.size(); }

  /// parents[i] as a signed value with the empty parent mapped to -1, which
  /// sits below every label.
  std::int64_t parent_value(std::size_t i) const {
    const auto& p = parents.at(i);
    return p ? static_cast<std::int64_t>(*p) : -1;
  }

  friend auto operator<=>(const Vcpc&, const Vcpc&) = default;
  friend bool operator==(const Vcpc&, const Vcpc&) = default;
};

/// v_i and u_i of the pruning process, as vertex ids of the encoded tree.
struct PruneTrace {
  std::vector<VertexId> pruned;     // v_0 .. v_{n-1}; the last is the root
  std::vector<VertexId> parent_of;  // u_i for i < n-1
};

struct EncodeResult {
  Vcpc code;
  PruneTrace trace;
};

enum class CodecErrorKind { OrderMismatch, InvalidCode, TooSmall };

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrorKind kind, const std::string& detail);
  CodecErrorKind kind() const noexcept { return kind_; }

 private:
  CodecErrorKind kind_;
};

/// Repeatedly prunes the lowest-ranked vertex of out-degree 0 and records
/// (rank of its parent, its color). Any bijection is accepted as `order`;
/// the canonical order gives the isomorphism-invariant code.
EncodeResult encode(const ColoredArborescence& tree, const CanonicalOrder& order);

/// encode(tree, canonical_order(tree)).code
Vcpc encode(const ColoredArborescence& tree);

/// Throws CodecError(InvalidCode) unless the code has the VCPC layout:
/// matching row lengths, the empty parent exactly in the last column, labels
/// below n, and (for n >= 2) a root child pruned last.
void validate_code(const Vcpc& code);

enum class DecodeMode { Lenient, Strict };

/// Rebuilds the tree labeled 0..n-1 (vertex i has label i, children in
/// ascending label order). Strict mode also re-encodes and rejects codes that
/// are not the canonical code of their tree.
ColoredArborescence decode(const Vcpc& code, DecodeMode mode = DecodeMode::Lenient);

/// Classical Prüfer sequence (length n-2) of an undirected labeled tree:
/// repeatedly remove the leaf of least label and record its neighbor's label.
/// `labels[v]` is the label of vertex v. Throws CodecError(TooSmall) for n < 2.
std::vector<Label> classical_prufer(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges,
                                    std::span<const Label> labels);

/// Inverse of classical_prufer on labels 0..code.size()+1; returns the edges
/// in the order they are attached, each as (code entry, leaf).
std::vector<std::pair<Label, Label>> classical_prufer_decode(std::span<const Label> code);

}  // namespace vcpc
