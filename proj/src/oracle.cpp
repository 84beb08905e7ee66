#include "vcpc/oracle.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include "vcpc/codec.hpp"

namespace vcpc::oracle {

namespace {

std::string key_of(const ColoredArborescence& tree, VertexId v) {
  std::vector<std::string> keys;
  for (VertexId c : tree.children(v)) keys.push_back(key_of(tree, c));
  std::sort(keys.begin(), keys.end());
  std::string out = std::to_string(tree.color(v)) + "(";
  for (const auto& k : keys) out += k + ",";
  out += ")";
  return out;
}

// Children of v in canonical order, computed from reference_ld_array.
std::vector<VertexId> sorted_children(const ColoredArborescence& tree, VertexId v) {
  std::vector<std::pair<std::pair<Color, LdArray>, VertexId>> keyed;
  for (VertexId c : tree.children(v)) keyed.push_back({{tree.color(c), reference_ld_array(tree, c)}, c});
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<VertexId> out;
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

void visit(const ColoredArborescence& tree, VertexId v, std::vector<VertexId>& out) {
  out.push_back(v);
  for (VertexId c : sorted_children(tree, v)) visit(tree, c, out);
}

}  // namespace

std::string brute_canonical(const ColoredArborescence& tree) { return key_of(tree, tree.root()); }

LdArray reference_ld_array(const ColoredArborescence& tree, VertexId v) {
  LdArray out;
  out.rows.emplace_back();
  for (VertexId c : sorted_children(tree, v)) {
    out.rows.front().push_back(tree.color(c));
    LdArray sub = reference_ld_array(tree, c);
    out.rows.insert(out.rows.end(), sub.rows.begin(), sub.rows.end());
  }
  return out;
}

CanonicalOrder reference_order(const ColoredArborescence& tree) {
  std::vector<VertexId> out;
  visit(tree, tree.root(), out);
  return CanonicalOrder(std::move(out));
}

SearchBudgetExceeded::SearchBudgetExceeded(std::size_t budget)
    : std::runtime_error("SearchBudgetExceeded: more than " + std::to_string(budget) + " node expansions") {}

namespace {

class Backtracker {
 public:
  Backtracker(const ColoredArborescence& query, const ColoredArborescence& host, const EmbeddingSearch& search,
              std::optional<VertexId> apex)
      : query_(query), host_(host), search_(search), apex_(apex), map_(query.size()), used_(host.size(), 0) {
    const CanonicalOrder qorder = reference_order(query);
    sequence_.assign(qorder.vertices().begin(), qorder.vertices().end());
    prev_sibling_.assign(query.size(), std::nullopt);
    for (VertexId v = 0; v < query.size(); ++v) {
      std::vector<VertexId> kids = sorted_children(query, v);
      for (std::size_t i = 1; i < kids.size(); ++i) prev_sibling_[kids[i]] = kids[i - 1];
    }
    if (search.ordered) host_rank_ = reference_order(host);
  }

  std::vector<std::vector<VertexId>> run() {
    if (query_.size() <= host_.size()) assign(0);
    return std::move(found_);
  }

 private:
  bool done() const { return search_.limit != 0 && found_.size() >= search_.limit; }

  void try_vertex(std::size_t k, VertexId q, VertexId y) {
    if (++expansions_ > search_.budget) throw SearchBudgetExceeded(search_.budget);
    if (used_[y] || host_.color(y) != query_.color(q)) return;
    if (search_.ordered && prev_sibling_[q]) {
      if (host_rank_.rank(y) <= host_rank_.rank(map_[*prev_sibling_[q]])) return;
    }
    map_[q] = y;
    used_[y] = 1;
    assign(k + 1);
    used_[y] = 0;
  }

  void assign(std::size_t k) {
    if (done()) return;
    if (k == sequence_.size()) {
      found_.push_back(map_);
      return;
    }
    const VertexId q = sequence_[k];
    if (k == 0) {
      if (apex_) {
        try_vertex(k, q, *apex_);
      } else {
        for (VertexId y = 0; y < host_.size() && !done(); ++y) try_vertex(k, q, y);
      }
      return;
    }
    const VertexId x = map_[*query_.parent(q)];
    for (VertexId y : host_.children(x)) {
      if (done()) return;
      try_vertex(k, q, y);
    }
  }

  const ColoredArborescence& query_;
  const ColoredArborescence& host_;
  const EmbeddingSearch& search_;
  std::optional<VertexId> apex_;
  std::vector<VertexId> sequence_;
  std::vector<std::optional<VertexId>> prev_sibling_;
  CanonicalOrder host_rank_;
  std::vector<VertexId> map_;
  std::vector<char> used_;
  std::size_t expansions_ = 0;
  std::vector<std::vector<VertexId>> found_;
};

}  // namespace

std::vector<std::vector<VertexId>> enumerate_embeddings(const ColoredArborescence& query,
                                                        const ColoredArborescence& host,
                                                        const EmbeddingSearch& search) {
  return Backtracker(query, host, search, std::nullopt).run();
}

bool has_embedding(const ColoredArborescence& query, const ColoredArborescence& host, bool ordered,
                   std::size_t budget) {
  EmbeddingSearch search{ordered, budget, 1};
  return !enumerate_embeddings(query, host, search).empty();
}

bool is_embedding(const ColoredArborescence& query, const ColoredArborescence& host,
                  const std::vector<VertexId>& map) {
  if (map.size() != query.size()) return false;
  std::vector<char> hit(host.size(), 0);
  for (VertexId q = 0; q < query.size(); ++q) {
    const VertexId y = map[q];
    if (y >= host.size() || hit[y] || host.color(y) != query.color(q)) return false;
    hit[y] = 1;
  }
  for (auto [p, c] : query.edges()) {
    if (host.parent(map[c]) != std::optional<VertexId>(map[p])) return false;
  }
  return true;
}

bool has_undirected_embedding(const ColoredArborescence& t1, const ColoredArborescence& t2, std::size_t budget) {
  if (t1.size() > t2.size()) return false;
  const ColoredArborescence q = reroot(t1, 0);
  EmbeddingSearch search{false, budget, 1};
  for (VertexId y = 0; y < t2.size(); ++y) {
    if (t2.color(y) != t1.color(0)) continue;
    const ColoredArborescence h = reroot(t2, y);
    if (!Backtracker(q, h, search, y).run().empty()) return true;
  }
  return false;
}

bool has_leaf_rooted_embedding(const ColoredArborescence& t1, const ColoredArborescence& t2, std::size_t budget) {
  if (t1.size() > t2.size()) return false;
  const ColoredArborescence q = reroot(t1, undirected_leaves(t1).front());
  for (VertexId leaf : undirected_leaves(t2)) {
    if (has_embedding(q, reroot(t2, leaf), true, budget)) return true;
  }
  return false;
}

void validate(const GenParams& params) {
  if (params.m < 1 || params.n < 1 || params.c < 1) {
    throw std::invalid_argument("m, n and c must all be at least 1");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t tree_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(splitmix64(seed) ^ index); }

namespace {

// Uniform draw from [0, bound) by rejection, identical on every platform.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

ColoredArborescence random_tree(const GenParams& params, std::uint64_t index) {
  validate(params);
  std::mt19937_64 rng(tree_seed(params.seed, index));
  const std::size_t n = 1 + bounded(rng, params.m);
  std::vector<std::vector<VertexId>> adj(n);
  if (n >= 2) {
    std::vector<Label> code(n - 2);
    for (auto& x : code) x = static_cast<Label>(bounded(rng, n));
    for (auto [a, b] : classical_prufer_decode(code)) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  std::vector<Color> colors(n);
  for (auto& c : colors) c = static_cast<Color>(bounded(rng, params.c));

  std::vector<std::vector<VertexId>> children(n);
  std::vector<char> seen(n, 0);
  std::vector<VertexId> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    std::sort(adj[v].begin(), adj[v].end());
    for (VertexId w : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      children[v].push_back(w);
      queue.push_back(w);
    }
  }
  std::vector<std::uint64_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  return ColoredArborescence(0, std::move(children), std::move(colors), std::move(ids));
}

std::vector<ColoredArborescence> random_corpus(const GenParams& params) {
  validate(params);
  std::vector<ColoredArborescence> out;
  out.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) out.push_back(random_tree(params, i));
  return out;
}

}  // namespace vcpc::oracle
