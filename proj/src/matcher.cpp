#include "vcpc/matcher.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "vcpc/canonical.hpp"

namespace vcpc {

MatcherError::MatcherError(MatcherErrorKind kind, const std::string& detail)
    : std::runtime_error([&] {
        switch (kind) {
          case MatcherErrorKind::IndexOutOfRange: return std::string("IndexOutOfRange: ");
          case MatcherErrorKind::SentinelCompared: return std::string("SentinelCompared: ");
          case MatcherErrorKind::CandidateExplosion: return std::string("CandidateExplosion: ");
        }
        return std::string();
      }() + detail),
      kind_(kind) {}

Shape shape(std::span<const std::int64_t> xs) {
  std::vector<std::int64_t> distinct(xs.begin(), xs.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  Shape s;
  s.values.reserve(xs.size());
  for (std::int64_t x : xs) {
    s.values.push_back(static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), x) - distinct.begin()));
  }
  return s;
}

std::vector<std::int64_t> parent_values(const Vcpc& code) {
  std::vector<std::int64_t> row(code.parents.size());
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = code.parent_value(i);
  return row;
}

bool codes_isomorphic(const Vcpc& p, const Vcpc& q) { return p == q; }

bool code_adjacent(const Vcpc& code, std::size_t i, std::size_t j) {
  const std::size_t n = code.size();
  if (j >= n || i >= j) {
    throw MatcherError(MatcherErrorKind::IndexOutOfRange,
                       "need i < j < n, got i=" + std::to_string(i) + " j=" + std::to_string(j) + " n=" + std::to_string(n));
  }
  if (j == n - 1) throw MatcherError(MatcherErrorKind::SentinelCompared, "position " + std::to_string(j) + " holds the empty parent");
  const std::int64_t pi = code.parent_value(i);
  if (code.parent_value(j) >= pi) return false;
  for (std::size_t k = i + 1; k < j; ++k) {
    if (code.parent_value(k) < pi) return false;
  }
  return true;
}

namespace {

// Next strictly smaller element to the right; the last position (value -1)
// bounds every scan.
std::vector<std::size_t> next_smaller(std::span<const std::int64_t> row) {
  const std::size_t n = row.size();
  std::vector<std::size_t> parent(n == 0 ? 0 : n - 1);
  if (n == 0) return parent;
  std::vector<std::size_t> stack{n - 1};
  for (std::size_t i = n - 1; i-- > 0;) {
    while (row[stack.back()] >= row[i]) stack.pop_back();
    parent[i] = stack.back();
    stack.push_back(i);
  }
  return parent;
}

// Range minimum over a fixed row.
class SparseMin {
 public:
  explicit SparseMin(std::span<const std::int64_t> row) {
    const std::size_t n = row.size();
    levels_.emplace_back(row.begin(), row.end());
    for (std::size_t w = 1; 2 * w <= n; w *= 2) {
      const auto& prev = levels_.back();
      std::vector<std::int64_t> next(n - 2 * w + 1);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::min(prev[i], prev[i + w]);
      levels_.push_back(std::move(next));
    }
  }

  // min over [lo, hi); callers guarantee lo < hi
  std::int64_t min(std::size_t lo, std::size_t hi) const {
    const std::size_t level = std::bit_width(hi - lo) - 1;
    return std::min(levels_[level][lo], levels_[level][hi - (std::size_t{1} << level)]);
  }

 private:
  std::vector<std::vector<std::int64_t>> levels_;
};

}  // namespace

std::vector<std::size_t> parent_positions(const Vcpc& code) { return next_smaller(parent_values(code)); }

std::vector<std::pair<std::size_t, std::size_t>> recover_edges(const Vcpc& code) {
  const auto parent = parent_positions(code);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i) edges.emplace_back(parent[i], i);
  return edges;
}

ColorMatchStream::ColorMatchStream(const Vcpc& host, const Vcpc& query, PrefixFilter filter)
    : n_(host.size()), k_(query.size()), filter_(std::move(filter)) {
  if (k_ == 0 || k_ > n_) {
    done_ = true;
    return;
  }
  const auto none = static_cast<std::uint32_t>(n_);
  next_valid_.assign((k_ + 1) * (n_ + 1), none);
  // Level k_ is the empty suffix: it can always be completed.
  for (std::size_t i = 0; i <= n_; ++i) next_valid_[k_ * (n_ + 1) + i] = static_cast<std::uint32_t>(i);
  for (std::size_t level = k_; level-- > 0;) {
    auto* row = &next_valid_[level * (n_ + 1)];
    const auto* below = &next_valid_[(level + 1) * (n_ + 1)];
    for (std::size_t i = n_; i-- > 0;) {
      const bool completes = level + 1 == k_ || below[i + 1] != none;
      row[i] = (host.colors[i] == query.colors[level] && completes) ? static_cast<std::uint32_t>(i) : row[i + 1];
    }
  }
  if (next_valid_[0] == none) done_ = true;
  current_.reserve(k_);
}

bool ColorMatchStream::next(EmbeddingIndices& out) {
  if (done_) return false;
  const auto none = static_cast<std::uint32_t>(n_);
  std::size_t level = 0;
  std::uint32_t start = 0;
  if (started_) {
    level = k_ - 1;
    start = current_.back() + 1;
    current_.pop_back();
  }
  started_ = true;
  while (true) {
    std::uint32_t pos = start <= n_ ? valid_from(level, start) : none;
    bool placed = false;
    while (pos != none) {
      current_.push_back(pos);
      if (!filter_ || filter_(current_)) {
        placed = true;
        break;
      }
      current_.pop_back();
      pos = valid_from(level, pos + 1);
    }
    if (placed) {
      if (level + 1 == k_) {
        out.indices = current_;
        return true;
      }
      ++level;
      start = pos + 1;
      continue;
    }
    if (level == 0) {
      done_ = true;
      return false;
    }
    --level;
    start = current_.back() + 1;
    current_.pop_back();
  }
}

bool incident_edge_ok(std::span<const std::int64_t> host_row, std::span<const std::int64_t> query_row,
                      const EmbeddingIndices& idx) {
  const auto parent = next_smaller(query_row);
  for (std::size_t a = 0; a < parent.size(); ++a) {
    const std::size_t ia = idx.indices[a];
    const std::size_t ib = idx.indices[parent[a]];
    const std::int64_t pa = host_row[ia];
    if (host_row[ib] >= pa) return false;
    for (std::size_t l = ia + 1; l < ib; ++l) {
      if (host_row[l] < pa) return false;
    }
  }
  return true;
}

BranchPartition branch_partition(const ColoredArborescence& tree, VertexId apex) {
  BranchPartition bp;
  bp.apex = apex;
  for (VertexId c : tree.children(apex)) {
    auto block = SubtreeHandle{&tree, c}.vertices();
    std::sort(block.begin(), block.end());
    bp.branches.push_back(std::move(block));
  }
  return bp;
}

namespace {

int sign(std::int64_t x) { return (x > 0) - (x < 0); }

class StagedMatcher {
 public:
  StagedMatcher(const Vcpc& query, const Vcpc& host, const MatchOptions& options)
      : query_(query),
        host_(host),
        options_(options),
        qrow_(parent_values(query)),
        hrow_(parent_values(host)),
        qparent_(next_smaller(qrow_)),
        qchildren_(query.size()),
        range_(hrow_) {
    for (std::size_t a = 0; a < qparent_.size(); ++a) qchildren_[qparent_[a]].push_back(a);
  }

  SubtreeResult run() {
    SubtreeResult result;
    if (query_.size() > host_.size()) return result;
    ColorMatchStream::PrefixFilter filter;
    if (options_.prune_prefixes) {
      filter = [&](std::span<const std::uint32_t> prefix) {
        count(result);
        const std::size_t j = prefix.size() - 1;
        if (!shape_ok_at(prefix, j)) {
          ++result.shape_rejections;
          return false;
        }
        if (!edges_ok_at(prefix, j)) {
          ++result.incident_rejections;
          return false;
        }
        return true;
      };
    }
    ColorMatchStream stream(host_, query_, std::move(filter));
    EmbeddingIndices idx;
    while (stream.next(idx)) {
      if (options_.prune_prefixes) {
        result.witness = idx;
        return result;
      }
      count(result);
      if (!shape_ok(idx)) {
        ++result.shape_rejections;
        continue;
      }
      if (!edges_ok(idx)) {
        ++result.incident_rejections;
        continue;
      }
      result.witness = idx;
      return result;
    }
    return result;
  }

 private:
  void count(SubtreeResult& result) const {
    if (++result.candidates_examined > options_.cap) {
      throw MatcherError(MatcherErrorKind::CandidateExplosion,
                         "more than " + std::to_string(options_.cap) + " candidate index sets for a " +
                             std::to_string(query_.size()) + "-vertex query in a " + std::to_string(host_.size()) +
                             "-vertex host");
    }
  }

  // Shape condition restricted to the pairs that end at query position j.
  // Only positions 0..n'-2 carry numeric parents.
  bool shape_ok_at(std::span<const std::uint32_t> idx, std::size_t j) const {
    if (j + 1 >= query_.size()) return true;
    const std::int64_t hj = hrow_[idx[j]];
    for (std::size_t t = 0; t < j; ++t) {
      if (sign(hj - hrow_[idx[t]]) != sign(qrow_[j] - qrow_[t])) return false;
    }
    return true;
  }

  // Incident edge condition for every query edge whose parent end is j.
  bool edges_ok_at(std::span<const std::uint32_t> idx, std::size_t b) const {
    const std::size_t ib = idx[b];
    for (std::size_t a : qchildren_[b]) {
      const std::size_t ia = idx[a];
      const std::int64_t pa = hrow_[ia];
      if (hrow_[ib] >= pa) return false;
      if (ia + 1 < ib && range_.min(ia + 1, ib) < pa) return false;
    }
    return true;
  }

  bool shape_ok(const EmbeddingIndices& idx) const {
    const std::size_t m = query_.size() - 1;
    std::vector<std::int64_t> picked(m);
    for (std::size_t j = 0; j < m; ++j) picked[j] = hrow_[idx.indices[j]];
    return shape(picked) == shape(std::span(qrow_).first(m));
  }

  bool edges_ok(const EmbeddingIndices& idx) const { return incident_edge_ok(hrow_, qrow_, idx); }

  const Vcpc& query_;
  const Vcpc& host_;
  const MatchOptions& options_;
  std::vector<std::int64_t> qrow_;
  std::vector<std::int64_t> hrow_;
  std::vector<std::size_t> qparent_;
  std::vector<std::vector<std::size_t>> qchildren_;
  SparseMin range_;
};

}  // namespace

SubtreeResult match_subarborescence(const Vcpc& query, const Vcpc& host, const MatchOptions& options) {
  return StagedMatcher(query, host, options).run();
}

std::optional<EmbeddingIndices> is_subarborescence(const Vcpc& query, const Vcpc& host, const MatchOptions& options) {
  return match_subarborescence(query, host, options).witness;
}

std::vector<VertexId> witness_vertex_map(const PruneTrace& query, const PruneTrace& host, const EmbeddingIndices& idx) {
  std::vector<VertexId> map(query.pruned.size());
  for (std::size_t j = 0; j < idx.size(); ++j) map.at(query.pruned.at(j)) = host.pruned.at(idx.indices[j]);
  return map;
}

std::vector<Vcpc> leaf_rooting_codes(const ColoredArborescence& tree) {
  std::vector<Vcpc> codes;
  std::set<Vcpc> seen;
  for (VertexId leaf : undirected_leaves(tree)) {
    Vcpc code = encode(reroot(tree, leaf));
    if (seen.insert(code).second) codes.push_back(std::move(code));
  }
  return codes;
}

const std::vector<Vcpc>& RootingCache::rootings(const ColoredArborescence& tree) {
  Vcpc key = encode(tree);
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto codes = leaf_rooting_codes(tree);
  std::lock_guard lock(mutex_);
  return entries_.try_emplace(std::move(key), std::move(codes)).first->second;
}

std::size_t RootingCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

UndirectedResult undirected_subtree(const ColoredArborescence& t1, const ColoredArborescence& t2, RootingCache* cache,
                                    const MatchOptions& options) {
  const VertexId anchor = undirected_leaves(t1).front();
  const Vcpc query = encode(reroot(t1, anchor));
  std::vector<Vcpc> local;
  const std::vector<Vcpc>* hosts = nullptr;
  if (cache != nullptr) {
    hosts = &cache->rootings(t2);
  } else {
    local = leaf_rooting_codes(t2);
    hosts = &local;
  }
  UndirectedResult result;
  if (t1.size() > t2.size()) return result;
  for (const Vcpc& host : *hosts) {
    ++result.rootings_tried;
    if (auto w = is_subarborescence(query, host, options)) {
      result.is_subtree = true;
      result.witness = std::move(w);
      return result;
    }
  }
  return result;
}

}  // namespace vcpc
