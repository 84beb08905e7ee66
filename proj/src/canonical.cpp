#include "vcpc/canonical.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace vcpc {

CanonicalError::CanonicalError(CanonicalErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(kind == CanonicalErrorKind::EmptyCandidateList ? "EmptyCandidateList: "
                                                                                    : "MalformedDescriptor: ") +
                         detail),
      kind_(kind) {}

CanonicalOrder::CanonicalOrder(std::vector<VertexId> vertex_at) : vertex_at_(std::move(vertex_at)) {
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  rank_of_.assign(vertex_at_.size(), kUnset);
  for (std::uint32_t r = 0; r < vertex_at_.size(); ++r) {
    const VertexId v = vertex_at_[r];
    if (v >= vertex_at_.size() || rank_of_[v] != kUnset) {
      throw std::invalid_argument("canonical order is not a permutation of 0.." + std::to_string(vertex_at_.size() - 1));
    }
    rank_of_[v] = r;
  }
}

namespace {

// Reverse of a breadth-first search from the root: children before parents.
std::vector<VertexId> reverse_bfs(const ColoredArborescence& tree) {
  std::vector<VertexId> order;
  order.reserve(tree.size());
  order.push_back(tree.root());
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (VertexId c : tree.children(order[head])) order.push_back(c);
  }
  std::reverse(order.begin(), order.end());
  return order;
}

bool less_by_color_and_ld(VertexId a, VertexId b, std::span<const Color> colors, const LdCache& cache) {
  if (colors[a] != colors[b]) return colors[a] < colors[b];
  return cache.at(a) < cache.at(b);
}

}  // namespace

VertexId min_vertex(std::span<const VertexId> candidates, std::span<const Color> colors, const LdCache& cache) {
  if (candidates.empty()) throw CanonicalError(CanonicalErrorKind::EmptyCandidateList, "no candidates");
  VertexId best = candidates.front();
  for (VertexId v : candidates.subspan(1)) {
    if (less_by_color_and_ld(v, best, colors, cache)) best = v;
  }
  return best;
}

std::vector<VertexId> sort_siblings(std::span<const VertexId> candidates, std::span<const Color> colors,
                                    const LdCache& cache) {
  std::vector<VertexId> sorted(candidates.begin(), candidates.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](VertexId a, VertexId b) { return less_by_color_and_ld(a, b, colors, cache); });
  return sorted;
}

LdResult ld_array(const ColoredArborescence& tree) {
  LdCache cache(tree.size());
  for (VertexId v : reverse_bfs(tree)) {
    LdArray& ld = cache[v];
    ld.rows.emplace_back();
    const auto sorted = sort_siblings(tree.children(v), tree.colors(), cache);
    for (VertexId c : sorted) {
      ld.rows.front().push_back(tree.color(c));
      const auto& child_rows = cache[c].rows;
      ld.rows.insert(ld.rows.end(), child_rows.begin(), child_rows.end());
    }
  }
  LdArray root = cache[tree.root()];
  return {std::move(root), std::move(cache)};
}

namespace {

// Compares LdArray(T[a]) with LdArray(T[b]) given that every vertex below a
// and b already has its children sorted. LdArray(T[v]) is the sequence of
// sorted child-color lists in pre-order, so a lock-step pre-order walk
// compares the two arrays row by row.
int compare_subtree_arrays(VertexId a, VertexId b, const std::vector<std::vector<VertexId>>& sorted,
                           std::span<const Color> colors) {
  std::vector<VertexId> left{a};
  std::vector<VertexId> right{b};
  while (true) {
    if (left.empty() || right.empty()) {
      if (left.empty() && right.empty()) return 0;
      return left.empty() ? -1 : 1;
    }
    const VertexId x = left.back();
    const VertexId y = right.back();
    left.pop_back();
    right.pop_back();
    const auto& xs = sorted[x];
    const auto& ys = sorted[y];
    const std::size_t common = std::min(xs.size(), ys.size());
    for (std::size_t i = 0; i < common; ++i) {
      if (colors[xs[i]] != colors[ys[i]]) return colors[xs[i]] < colors[ys[i]] ? -1 : 1;
    }
    if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) left.push_back(*it);
    for (auto it = ys.rbegin(); it != ys.rend(); ++it) right.push_back(*it);
  }
}

}  // namespace

std::vector<std::vector<VertexId>> canonical_children(const ColoredArborescence& tree) {
  std::vector<std::vector<VertexId>> sorted(tree.size());
  const auto colors = tree.colors();
  for (VertexId v : reverse_bfs(tree)) {
    auto kids = tree.children(v);
    sorted[v].assign(kids.begin(), kids.end());
    std::stable_sort(sorted[v].begin(), sorted[v].end(), [&](VertexId a, VertexId b) {
      if (colors[a] != colors[b]) return colors[a] < colors[b];
      return compare_subtree_arrays(a, b, sorted, colors) < 0;
    });
  }
  return sorted;
}

namespace {

std::vector<VertexId> preorder(VertexId root, const std::vector<std::vector<VertexId>>& sorted) {
  std::vector<VertexId> out;
  out.reserve(sorted.size());
  std::vector<VertexId> stack{root};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (auto it = sorted[v].rbegin(); it != sorted[v].rend(); ++it) stack.push_back(*it);
  }
  return out;
}

}  // namespace

FullLdArray full_ld_array(const ColoredArborescence& tree) {
  const auto sorted = canonical_children(tree);
  FullLdArray full;
  full.rows.reserve(tree.size() + 1);
  full.rows.push_back({tree.color(tree.root())});
  for (VertexId v : preorder(tree.root(), sorted)) {
    ColorList row;
    row.reserve(sorted[v].size());
    for (VertexId c : sorted[v]) row.push_back(tree.color(c));
    full.rows.push_back(std::move(row));
  }
  return full;
}

CanonicalOrder canonical_order(const ColoredArborescence& tree) {
  return CanonicalOrder(preorder(tree.root(), canonical_children(tree)));
}

ColoredArborescence canonical_relabel(const ColoredArborescence& tree) {
  const auto sorted = canonical_children(tree);
  const CanonicalOrder order(preorder(tree.root(), sorted));
  const std::size_t n = tree.size();
  std::vector<std::vector<VertexId>> children(n);
  std::vector<Color> colors(n);
  std::vector<std::uint64_t> ids(n);
  for (std::uint32_t r = 0; r < n; ++r) {
    const VertexId v = order.vertex(r);
    colors[r] = tree.color(v);
    ids[r] = tree.original_id(v);
    for (VertexId c : sorted[v]) children[r].push_back(order.rank(c));
  }
  return ColoredArborescence(0, std::move(children), std::move(colors), std::move(ids));
}

ColoredArborescence reconstruct(const FullLdArray& full) {
  if (full.rows.empty() || full.rows.front().size() != 1) {
    throw CanonicalError(CanonicalErrorKind::MalformedDescriptor, "first row must hold exactly the root color");
  }
  const std::size_t n = full.rows.size() - 1;
  std::size_t declared = 1;
  for (std::size_t r = 1; r < full.rows.size(); ++r) declared += full.rows[r].size();
  if (declared != n) {
    throw CanonicalError(CanonicalErrorKind::MalformedDescriptor,
                         std::to_string(declared) + " colors listed for " + std::to_string(n) + " vertex rows");
  }

  // Open child slots: (parent, colors still to be assigned, next slot index).
  struct Frame {
    VertexId parent;
    const ColorList* pending;
    std::size_t next;
  };
  constexpr VertexId kArtificial = ~VertexId{0};
  std::vector<Frame> stack{{kArtificial, &full.rows.front(), 0}};
  std::vector<std::vector<VertexId>> children(n);
  std::vector<Color> colors(n);
  for (VertexId v = 0; v < n; ++v) {
    while (!stack.empty() && stack.back().next == stack.back().pending->size()) stack.pop_back();
    if (stack.empty()) {
      throw CanonicalError(CanonicalErrorKind::MalformedDescriptor,
                           "row " + std::to_string(v + 1) + " has no parent slot left");
    }
    Frame& top = stack.back();
    colors[v] = (*top.pending)[top.next++];
    if (top.parent != kArtificial) children[top.parent].push_back(v);
    if (!full.rows[v + 1].empty()) stack.push_back({v, &full.rows[v + 1], 0});
  }
  for (const Frame& f : stack) {
    if (f.next != f.pending->size()) {
      throw CanonicalError(CanonicalErrorKind::MalformedDescriptor, "descriptor ends with unfilled child slots");
    }
  }
  return ColoredArborescence(0, std::move(children), std::move(colors));
}

}  // namespace vcpc
