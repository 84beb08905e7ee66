#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vcpc {

using VertexId = std::uint32_t;
using Color = std::uint32_t;

enum class TreeErrorKind {
  CycleDetected,
  MultipleRoots,
  DisconnectedVertex,
  MissingColor,
  DuplicateEdge,
  EmptyTree,
};

std::string_view to_string(TreeErrorKind kind) noexcept;

class TreeError : public std::runtime_error {
 public:
  TreeError(TreeErrorKind kind, const std::string& detail);
  TreeErrorKind kind() const noexcept { return kind_; }

 private:
  TreeErrorKind kind_;
};

/// Edge as supplied on input, with arbitrary nonnegative vertex labels.
struct InputEdge {
  std::uint64_t parent;
  std::uint64_t child;
};

/// Rooted tree with every edge directed away from the root and a color on
/// every vertex. Vertex ids are always 0..n-1; the id each vertex carried on
/// input is kept in original_ids(). Immutable once built.
class ColoredArborescence {
 public:
  /// Validates that `children` describes an arborescence rooted at `root`
  /// on vertices 0..colors.size()-1. Throws TreeError otherwise.
  ColoredArborescence(VertexId root, std::vector<std::vector<VertexId>> children,
                      std::vector<Color> colors,
                      std::vector<std::uint64_t> original_ids = {});

  static ColoredArborescence single_vertex(Color color);

  std::size_t size() const noexcept { return colors_.size(); }
  VertexId root() const noexcept { return root_; }
  Color color(VertexId v) const { return colors_.at(v); }
  std::span<const Color> colors() const noexcept { return colors_; }
  std::span<const VertexId> children(VertexId v) const { return children_.at(v); }
  std::optional<VertexId> parent(VertexId v) const;
  std::size_t out_degree(VertexId v) const { return children_.at(v).size(); }

  std::uint64_t original_id(VertexId v) const { return original_ids_.at(v); }
  std::span<const std::uint64_t> original_ids() const noexcept { return original_ids_; }

  /// (parent, child) pairs, parents in ascending id order, children in stored order.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  /// Structural equality: same root, same children lists, same colors.
  /// Original ids are ignored.
  friend bool operator==(const ColoredArborescence& a, const ColoredArborescence& b) {
    return a.root_ == b.root_ && a.children_ == b.children_ && a.colors_ == b.colors_;
  }

 private:
  VertexId root_ = 0;
  std::vector<std::vector<VertexId>> children_;
  std::vector<VertexId> parent_;  // parent_[root] == root
  std::vector<Color> colors_;
  std::vector<std::uint64_t> original_ids_;
};

/// Builds and validates an arborescence from an edge list. The root is the
/// unique vertex of in-degree 0. Vertex ids are renumbered 0..n-1 in ascending
/// order of their input labels; children keep edge-list order.
ColoredArborescence build_tree(std::span<const InputEdge> edges,
                               const std::map<std::uint64_t, Color>& colors);

/// Vertices with out-degree 0 and in-degree at most 1, ascending.
std::vector<VertexId> leaves(const ColoredArborescence& tree);

/// T[apex]: the apex plus all of its descendants.
struct SubtreeHandle {
  const ColoredArborescence* tree;
  VertexId apex;

  /// Pre-order (stored child order) listing of T[apex].
  std::vector<VertexId> vertices() const;
};

/// Leaves of the underlying undirected tree (degree <= 1), ascending.
std::vector<VertexId> undirected_leaves(const ColoredArborescence& tree);

/// Re-orients the underlying undirected tree away from `new_root`.
/// Children are listed in ascending id order; ids and colors are preserved.
ColoredArborescence reroot(const ColoredArborescence& tree, VertexId new_root);

}  // namespace vcpc
