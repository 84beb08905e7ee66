#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "vcpc/canonical.hpp"
#include "vcpc/codec.hpp"
#include "vcpc/oracle.hpp"
#include "vcpc/tree.hpp"

namespace support {

inline std::vector<vcpc::ColoredArborescence> corpus(std::size_t m, std::size_t n, std::size_t c, std::uint64_t seed) {
  return vcpc::oracle::random_corpus({m, n, c, seed});
}

/// The same tree under fresh random input ids and a shuffled edge list.
inline vcpc::ColoredArborescence scramble(const vcpc::ColoredArborescence& tree, std::mt19937_64& rng) {
  std::vector<std::uint64_t> ids(tree.size());
  std::set<std::uint64_t> used;
  for (auto& id : ids) {
    do {
      id = rng() % 1'000'000;
    } while (!used.insert(id).second);
  }
  std::vector<vcpc::InputEdge> edges;
  for (auto [p, c] : tree.edges()) edges.push_back({ids[p], ids[c]});
  std::shuffle(edges.begin(), edges.end(), rng);
  std::map<std::uint64_t, vcpc::Color> colors;
  for (vcpc::VertexId v = 0; v < tree.size(); ++v) colors[ids[v]] = tree.color(v);
  return vcpc::build_tree(edges, colors);
}

/// Edge set of the tree as (parent, child) pairs.
inline std::set<std::pair<vcpc::VertexId, vcpc::VertexId>> edge_set(const vcpc::ColoredArborescence& tree) {
  auto e = tree.edges();
  return {e.begin(), e.end()};
}

/// Tree obtained by attaching a random colored leaf under a random vertex.
inline vcpc::ColoredArborescence grow(const vcpc::ColoredArborescence& tree, std::size_t colors, std::mt19937_64& rng) {
  const std::size_t n = tree.size();
  std::vector<std::vector<vcpc::VertexId>> children(n + 1);
  std::vector<vcpc::Color> col(tree.colors().begin(), tree.colors().end());
  for (vcpc::VertexId v = 0; v < n; ++v) children[v].assign(tree.children(v).begin(), tree.children(v).end());
  const auto parent = static_cast<vcpc::VertexId>(rng() % n);
  auto& kids = children[parent];
  kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(rng() % (kids.size() + 1)), static_cast<vcpc::VertexId>(n));
  col.push_back(static_cast<vcpc::Color>(rng() % colors));
  return vcpc::ColoredArborescence(tree.root(), std::move(children), std::move(col));
}

}  // namespace support
