#include "vcpc/codec.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <queue>
#include <set>
#include <string>

namespace vcpc {

CodecError::CodecError(CodecErrorKind kind, const std::string& detail)
    : std::runtime_error([&] {
        switch (kind) {
          case CodecErrorKind::OrderMismatch: return std::string("OrderMismatch: ");
          case CodecErrorKind::InvalidCode: return std::string("InvalidCode: ");
          case CodecErrorKind::TooSmall: return std::string("TooSmall: ");
        }
        return std::string();
      }() + detail),
      kind_(kind) {}

EncodeResult encode(const ColoredArborescence& tree, const CanonicalOrder& order) {
  const std::size_t n = tree.size();
  if (order.size() != n) {
    throw CodecError(CodecErrorKind::OrderMismatch,
                     "order covers " + std::to_string(order.size()) + " vertices, tree has " + std::to_string(n));
  }

  // Min-heap of (rank, vertex) over vertices whose children are all pruned.
  using Entry = std::pair<std::uint32_t, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> eligible;
  std::vector<std::size_t> remaining(n);
  for (VertexId v = 0; v < n; ++v) {
    remaining[v] = tree.out_degree(v);
    if (remaining[v] == 0) eligible.emplace(order.rank(v), v);
  }

  EncodeResult out;
  out.code.parents.reserve(n);
  out.code.colors.reserve(n);
  out.trace.pruned.reserve(n);
  out.trace.parent_of.reserve(n - 1);
  while (!eligible.empty()) {
    const VertexId v = eligible.top().second;
    eligible.pop();
    out.trace.pruned.push_back(v);
    out.code.colors.push_back(tree.color(v));
    if (auto p = tree.parent(v)) {
      out.code.parents.emplace_back(order.rank(*p));
      out.trace.parent_of.push_back(*p);
      if (--remaining[*p] == 0) eligible.emplace(order.rank(*p), *p);
    } else {
      out.code.parents.emplace_back(std::nullopt);
    }
  }
  return out;
}

Vcpc encode(const ColoredArborescence& tree) { return encode(tree, canonical_order(tree)).code; }

void validate_code(const Vcpc& code) {
  const std::size_t n = code.size();
  if (n == 0) throw CodecError(CodecErrorKind::InvalidCode, "empty code");
  if (code.parents.size() != n) {
    throw CodecError(CodecErrorKind::InvalidCode, "parents row has " + std::to_string(code.parents.size()) +
                                                      " entries, colors row has " + std::to_string(n));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!code.parents[i]) throw CodecError(CodecErrorKind::InvalidCode, "empty parent at column " + std::to_string(i));
    if (*code.parents[i] >= n) {
      throw CodecError(CodecErrorKind::InvalidCode,
                       "parent label " + std::to_string(*code.parents[i]) + " out of range at column " +
                           std::to_string(i));
    }
  }
  if (code.parents.back()) throw CodecError(CodecErrorKind::InvalidCode, "last column must hold the empty parent");
  if (n >= 2 && *code.parents[n - 2] != 0) {
    throw CodecError(CodecErrorKind::InvalidCode, "last non-root column must name the root (label 0)");
  }
}

ColoredArborescence decode(const Vcpc& code, DecodeMode mode) {
  validate_code(code);
  const std::size_t n = code.size();
  if (n == 1) return ColoredArborescence::single_vertex(code.colors.front());

  // Leaf-set inverse over the n-1 numeric symbols: at step i the pruned
  // vertex is the least label not yet pruned that is no longer a parent of
  // anything still to be pruned.
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) ++pending[*code.parents[i]];
  std::set<Label> ready;
  for (Label v = 0; v < n; ++v) {
    if (pending[v] == 0) ready.insert(v);
  }
  std::vector<std::vector<VertexId>> children(n);
  std::vector<Color> colors(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (ready.empty()) throw CodecError(CodecErrorKind::InvalidCode, "no prunable vertex at column " + std::to_string(i));
    const Label leaf = *ready.begin();
    ready.erase(ready.begin());
    const Label parent = *code.parents[i];
    children[parent].push_back(leaf);
    colors[leaf] = code.colors[i];
    if (--pending[parent] == 0) ready.insert(parent);
  }
  if (ready.size() != 1 || *ready.begin() != 0) {
    throw CodecError(CodecErrorKind::InvalidCode, "pruning does not end at the root label 0");
  }
  colors[0] = code.colors.back();
  for (auto& kids : children) std::sort(kids.begin(), kids.end());

  ColoredArborescence tree(0, std::move(children), std::move(colors));
  if (mode == DecodeMode::Strict && encode(tree) != code) {
    throw CodecError(CodecErrorKind::InvalidCode, "code is not canonical for the tree it describes");
  }
  return tree;
}

std::vector<Label> classical_prufer(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges,
                                    std::span<const Label> labels) {
  if (n < 2) throw CodecError(CodecErrorKind::TooSmall, "need at least 2 vertices, got " + std::to_string(n));
  if (edges.size() != n - 1 || labels.size() != n) {
    throw CodecError(CodecErrorKind::InvalidCode, "tree on " + std::to_string(n) + " vertices needs " +
                                                      std::to_string(n - 1) + " edges and " + std::to_string(n) +
                                                      " labels");
  }
  std::vector<std::vector<VertexId>> adj(n);
  for (auto [a, b] : edges) {
    adj.at(a).push_back(b);
    adj.at(b).push_back(a);
  }
  std::vector<std::size_t> degree(n);
  std::set<std::pair<Label, VertexId>> leaf_set;
  for (VertexId v = 0; v < n; ++v) {
    degree[v] = adj[v].size();
    if (degree[v] == 1) leaf_set.emplace(labels[v], v);
  }
  std::vector<char> removed(n, 0);
  std::vector<Label> code;
  code.reserve(n - 2);
  while (code.size() + 2 < n) {
    const VertexId leaf = leaf_set.begin()->second;
    leaf_set.erase(leaf_set.begin());
    removed[leaf] = 1;
    for (VertexId w : adj[leaf]) {
      if (removed[w]) continue;
      code.push_back(labels[w]);
      if (--degree[w] == 1) leaf_set.emplace(labels[w], w);
    }
  }
  return code;
}

std::vector<std::pair<Label, Label>> classical_prufer_decode(std::span<const Label> code) {
  const std::size_t n = code.size() + 2;
  std::vector<std::size_t> pending(n, 0);
  for (Label x : code) {
    if (x >= n) throw CodecError(CodecErrorKind::InvalidCode, "label " + std::to_string(x) + " out of range");
    ++pending[x];
  }
  std::set<Label> leaf_set;
  for (Label v = 0; v < n; ++v) {
    if (pending[v] == 0) leaf_set.insert(v);
  }
  std::vector<std::pair<Label, Label>> edges;
  edges.reserve(n - 1);
  for (Label x : code) {
    const Label leaf = *leaf_set.begin();
    leaf_set.erase(leaf_set.begin());
    edges.emplace_back(x, leaf);
    if (--pending[x] == 0) leaf_set.insert(x);
  }
  edges.emplace_back(*leaf_set.begin(), *std::next(leaf_set.begin()));
  return edges;
}

}  // namespace vcpc
