#include "vcpc/tree.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

namespace vcpc {

std::string_view to_string(TreeErrorKind kind) noexcept {
  switch (kind) {
    case TreeErrorKind::CycleDetected: return "CycleDetected";
    case TreeErrorKind::MultipleRoots: return "MultipleRoots";
    case TreeErrorKind::DisconnectedVertex: return "DisconnectedVertex";
    case TreeErrorKind::MissingColor: return "MissingColor";
    case TreeErrorKind::DuplicateEdge: return "DuplicateEdge";
    case TreeErrorKind::EmptyTree: return "EmptyTree";
  }
  return "Unknown";
}

TreeError::TreeError(TreeErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

namespace {

std::string edge_str(std::uint64_t p, std::uint64_t c) {
  return "(" + std::to_string(p) + "," + std::to_string(c) + ")";
}

}  // namespace

ColoredArborescence::ColoredArborescence(VertexId root,
                                         std::vector<std::vector<VertexId>> children,
                                         std::vector<Color> colors,
                                         std::vector<std::uint64_t> original_ids)
    : root_(root),
      children_(std::move(children)),
      colors_(std::move(colors)),
      original_ids_(std::move(original_ids)) {
  const std::size_t n = colors_.size();
  if (n == 0) throw TreeError(TreeErrorKind::EmptyTree, "tree has no vertices");
  if (root_ >= n) throw TreeError(TreeErrorKind::DisconnectedVertex, "root " + std::to_string(root_) + " out of range");
  if (children_.size() != n) {
    throw TreeError(TreeErrorKind::MissingColor, "children table has " + std::to_string(children_.size()) +
                                                     " entries for " + std::to_string(n) + " colors");
  }
  if (original_ids_.empty()) {
    original_ids_.resize(n);
    for (std::size_t v = 0; v < n; ++v) original_ids_[v] = v;
  }

  constexpr VertexId kUnset = ~VertexId{0};
  parent_.assign(n, kUnset);
  parent_[root_] = root_;
  for (VertexId p = 0; p < n; ++p) {
    for (VertexId c : children_[p]) {
      if (c >= n) throw TreeError(TreeErrorKind::DisconnectedVertex, "child id " + std::to_string(c) + " out of range");
      if (c == p) throw TreeError(TreeErrorKind::CycleDetected, "self-loop at " + std::to_string(p));
      if (c == root_) throw TreeError(TreeErrorKind::CycleDetected, "edge " + edge_str(p, c) + " enters the root");
      if (parent_[c] == p) throw TreeError(TreeErrorKind::DuplicateEdge, "edge " + edge_str(p, c));
      if (parent_[c] != kUnset) {
        throw TreeError(TreeErrorKind::CycleDetected, "vertex " + std::to_string(c) + " has a second parent via edge " +
                                                          edge_str(p, c));
      }
      parent_[c] = p;
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if (parent_[v] == kUnset) {
      throw TreeError(TreeErrorKind::MultipleRoots, "vertex " + std::to_string(v) + " has no parent");
    }
  }
  // Every vertex has one parent; anything unreachable sits on a cycle.
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{root_};
  std::size_t visited = 0;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    seen[v] = 1;
    ++visited;
    for (VertexId c : children_[v]) stack.push_back(c);
  }
  if (visited != n) {
    for (VertexId v = 0; v < n; ++v) {
      if (!seen[v]) throw TreeError(TreeErrorKind::CycleDetected, "vertex " + std::to_string(v) + " lies on a cycle");
    }
  }
}

ColoredArborescence ColoredArborescence::single_vertex(Color color) {
  return ColoredArborescence(0, {{}}, {color});
}

std::optional<VertexId> ColoredArborescence::parent(VertexId v) const {
  if (parent_.at(v) == v) return std::nullopt;
  return parent_[v];
}

std::vector<std::pair<VertexId, VertexId>> ColoredArborescence::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(size() - 1);
  for (VertexId p = 0; p < size(); ++p) {
    for (VertexId c : children_[p]) out.emplace_back(p, c);
  }
  return out;
}

ColoredArborescence build_tree(std::span<const InputEdge> edges,
                               const std::map<std::uint64_t, Color>& colors) {
  std::set<std::uint64_t> labels;
  for (const auto& [label, color] : colors) labels.insert(label);
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen_edges;
  std::set<std::uint64_t> on_edges;
  for (const auto& e : edges) {
    if (e.parent == e.child) throw TreeError(TreeErrorKind::CycleDetected, "self-loop " + edge_str(e.parent, e.child));
    if (!seen_edges.emplace(e.parent, e.child).second) {
      throw TreeError(TreeErrorKind::DuplicateEdge, "edge " + edge_str(e.parent, e.child) + " repeated");
    }
    on_edges.insert(e.parent);
    on_edges.insert(e.child);
  }
  for (std::uint64_t v : on_edges) {
    if (!colors.contains(v)) throw TreeError(TreeErrorKind::MissingColor, "vertex " + std::to_string(v) + " has no color");
  }
  if (labels.empty()) throw TreeError(TreeErrorKind::EmptyTree, "no vertices supplied");
  if (edges.empty()) {
    if (labels.size() > 1) {
      throw TreeError(TreeErrorKind::DisconnectedVertex,
                      "vertex " + std::to_string(*std::next(labels.begin())) + " is not joined to any edge");
    }
    return ColoredArborescence(0, {{}}, {colors.begin()->second}, {*labels.begin()});
  }
  for (std::uint64_t v : labels) {
    if (!on_edges.contains(v)) {
      throw TreeError(TreeErrorKind::DisconnectedVertex, "vertex " + std::to_string(v) + " is not joined to any edge");
    }
  }

  std::vector<std::uint64_t> original(labels.begin(), labels.end());
  std::unordered_map<std::uint64_t, VertexId> index;
  for (VertexId i = 0; i < original.size(); ++i) index.emplace(original[i], i);
  const std::size_t n = original.size();

  std::vector<std::vector<VertexId>> children(n);
  std::vector<std::uint32_t> in_degree(n, 0);
  for (const auto& e : edges) {
    const VertexId p = index.at(e.parent);
    const VertexId c = index.at(e.child);
    children[p].push_back(c);
    if (++in_degree[c] > 1) {
      throw TreeError(TreeErrorKind::CycleDetected,
                      "vertex " + std::to_string(e.child) + " has a second parent via edge " + edge_str(e.parent, e.child));
    }
  }
  std::vector<VertexId> roots;
  for (VertexId v = 0; v < n; ++v) {
    if (in_degree[v] == 0) roots.push_back(v);
  }
  if (roots.empty()) throw TreeError(TreeErrorKind::CycleDetected, "no vertex of in-degree 0");
  if (roots.size() > 1) {
    throw TreeError(TreeErrorKind::MultipleRoots, "vertices " + std::to_string(original[roots[0]]) + " and " +
                                                      std::to_string(original[roots[1]]) + " both have in-degree 0");
  }
  std::vector<Color> vertex_colors(n);
  for (VertexId v = 0; v < n; ++v) vertex_colors[v] = colors.at(original[v]);

  std::vector<char> reached(n, 0);
  std::vector<VertexId> stack{roots.front()};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    reached[v] = 1;
    for (VertexId c : children[v]) stack.push_back(c);
  }
  for (VertexId v = 0; v < n; ++v) {
    if (!reached[v]) {
      throw TreeError(TreeErrorKind::CycleDetected, "vertex " + std::to_string(original[v]) + " lies on a cycle");
    }
  }
  return ColoredArborescence(roots.front(), std::move(children), std::move(vertex_colors), std::move(original));
}

std::vector<VertexId> leaves(const ColoredArborescence& tree) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (tree.out_degree(v) == 0) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> SubtreeHandle::vertices() const {
  std::vector<VertexId> out;
  std::vector<VertexId> stack{apex};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    out.push_back(v);
    auto kids = tree->children(v);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

namespace {

std::vector<std::vector<VertexId>> undirected_adjacency(const ColoredArborescence& tree) {
  std::vector<std::vector<VertexId>> adj(tree.size());
  for (auto [p, c] : tree.edges()) {
    adj[p].push_back(c);
    adj[c].push_back(p);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

}  // namespace

std::vector<VertexId> undirected_leaves(const ColoredArborescence& tree) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < tree.size(); ++v) {
    const std::size_t degree = tree.out_degree(v) + (tree.parent(v) ? 1 : 0);
    if (degree <= 1) out.push_back(v);
  }
  return out;
}

ColoredArborescence reroot(const ColoredArborescence& tree, VertexId new_root) {
  const auto adj = undirected_adjacency(tree);
  std::vector<std::vector<VertexId>> children(tree.size());
  std::vector<char> seen(tree.size(), 0);
  std::deque<VertexId> queue{new_root};
  seen.at(new_root) = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (VertexId w : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      children[v].push_back(w);
      queue.push_back(w);
    }
  }
  std::vector<Color> colors(tree.colors().begin(), tree.colors().end());
  std::vector<std::uint64_t> ids(tree.original_ids().begin(), tree.original_ids().end());
  return ColoredArborescence(new_root, std::move(children), std::move(colors), std::move(ids));
}

}  // namespace vcpc
