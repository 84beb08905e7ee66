#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "vcpc/tree.hpp"

namespace vcpc {

using ColorList = std::vector<Color>;

/// Lexicographic depth-first search array of a subtree: one color list per
/// vertex in canonical pre-order, each holding the sorted child colors.
/// Ordering is lexicographic over rows, rows lexicographic over colors, a
/// strict prefix comparing smaller (std::vector semantics).
struct LdArray {
  std::vector<ColorList> rows;

  friend auto operator<=>(const LdArray&, const LdArray&) = default;
  friend bool operator==(const LdArray&, const LdArray&) = default;
};

/// [[color(root)]] followed by the rows of LdArray(tree). Determines the
/// colored arborescence up to isomorphism.
struct FullLdArray {
  std::vector<ColorList> rows;

  friend auto operator<=>(const FullLdArray&, const FullLdArray&) = default;
  friend bool operator==(const FullLdArray&, const FullLdArray&) = default;
};

/// LdArray of T[v] for every vertex v, indexed by vertex id.
using LdCache = std::vector<LdArray>;

enum class CanonicalErrorKind { EmptyCandidateList, MalformedDescriptor };

class CanonicalError : public std::runtime_error {
 public:
  CanonicalError(CanonicalErrorKind kind, const std::string& detail);
  CanonicalErrorKind kind() const noexcept { return kind_; }

 private:
  CanonicalErrorKind kind_;
};

/// Bijection between vertices and ranks 0..n-1.
class CanonicalOrder {
 public:
  CanonicalOrder() = default;
  /// `vertex_at[r]` is the vertex of rank r. Throws std::invalid_argument if
  /// the list is not a permutation of 0..n-1.
  explicit CanonicalOrder(std::vector<VertexId> vertex_at);

  std::size_t size() const noexcept { return vertex_at_.size(); }
  std::uint32_t rank(VertexId v) const { return rank_of_.at(v); }
  VertexId vertex(std::uint32_t rank) const { return vertex_at_.at(rank); }
  std::span<const VertexId> vertices() const noexcept { return vertex_at_; }

  friend bool operator==(const CanonicalOrder&, const CanonicalOrder&) = default;

 private:
  std::vector<std::uint32_t> rank_of_;
  std::vector<VertexId> vertex_at_;
};

/// Candidate minimizing (color, LdArray); the earliest one wins full ties.
VertexId min_vertex(std::span<const VertexId> candidates, std::span<const Color> colors, const LdCache& cache);

/// Candidates ascending by (color, LdArray); stable on full ties.
std::vector<VertexId> sort_siblings(std::span<const VertexId> candidates, std::span<const Color> colors,
                                    const LdCache& cache);

struct LdResult {
  LdArray root;
  LdCache per_vertex;
};

/// Computes every LdArray bottom-up in reverse breadth-first order.
/// Memory is proportional to the sum of subtree sizes.
LdResult ld_array(const ColoredArborescence& tree);

/// Children of every vertex sorted by (color, LdArray of the child subtree),
/// ties kept in stored order. Runs without materializing per-vertex arrays.
std::vector<std::vector<VertexId>> canonical_children(const ColoredArborescence& tree);

FullLdArray full_ld_array(const ColoredArborescence& tree);

/// Pre-order rank of every vertex when children are visited in canonical order.
CanonicalOrder canonical_order(const ColoredArborescence& tree);

/// The tree relabeled so that vertex i is the vertex of canonical rank i, with
/// children listed in canonical order.
ColoredArborescence canonical_relabel(const ColoredArborescence& tree);

/// Inverse of full_ld_array: vertices numbered 0..n-1 in canonical order.
ColoredArborescence reconstruct(const FullLdArray& full);

}  // namespace vcpc
