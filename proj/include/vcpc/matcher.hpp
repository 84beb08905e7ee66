#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vcpc/codec.hpp"
#include "vcpc/tree.hpp"

namespace vcpc {

enum class MatcherErrorKind { IndexOutOfRange, SentinelCompared, CandidateExplosion };

class MatcherError : public std::runtime_error {
 public:
  MatcherError(MatcherErrorKind kind, const std::string& detail);
  MatcherErrorKind kind() const noexcept { return kind_; }

 private:
  MatcherErrorKind kind_;
};

/// Image of a sequence under the order-preserving bijection onto {0..m-1}.
struct Shape {
  std::vector<std::uint32_t> values;

  friend bool operator==(const Shape&, const Shape&) = default;
};

Shape shape(std::span<const std::int64_t> xs);

/// The parents row as signed values, the empty parent mapped to -1.
std::vector<std::int64_t> parent_values(const Vcpc& code);

/// P == Q entry for entry.
bool codes_isomorphic(const Vcpc& p, const Vcpc& q);

/// True iff v_j is the parent of v_i: p_j < p_i and p_k >= p_i for i < k < j.
/// Requires i < j < n-1. Throws IndexOutOfRange or SentinelCompared.
bool code_adjacent(const Vcpc& code, std::size_t i, std::size_t j);

/// For every i < n-1 the prune position of the parent of v_i, read off the
/// code alone (the empty parent counts as smaller than every label).
std::vector<std::size_t> parent_positions(const Vcpc& code);

/// (parent position, child position) for every edge, in child order.
std::vector<std::pair<std::size_t, std::size_t>> recover_edges(const Vcpc& code);

/// Strictly ascending positions into a host code, one per query position.
struct EmbeddingIndices {
  std::vector<std::uint32_t> indices;

  std::size_t size() const noexcept { return indices.size(); }
  friend auto operator<=>(const EmbeddingIndices&, const EmbeddingIndices&) = default;
  friend bool operator==(const EmbeddingIndices&, const EmbeddingIndices&) = default;
};

/// Ascending index sets {i_j} with host.colors[i_j] == query.colors[j], in
/// lexicographic order. An optional prefix filter is consulted each time a
/// position is appended; a rejected prefix removes every set extending it.
class ColorMatchStream {
 public:
  using PrefixFilter = std::function<bool(std::span<const std::uint32_t> prefix)>;

  ColorMatchStream(const Vcpc& host, const Vcpc& query, PrefixFilter filter = {});

  /// Writes the next index set into `out`; false once exhausted.
  bool next(EmbeddingIndices& out);

 private:
  std::uint32_t valid_from(std::size_t level, std::uint32_t start) const {
    return next_valid_[level * (n_ + 1) + start];
  }

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<std::uint32_t> next_valid_;  // (k_ + 1) x (n_ + 1), n_ meaning none
  std::vector<std::uint32_t> current_;
  PrefixFilter filter_;
  bool started_ = false;
  bool done_ = false;
};

/// Third condition of the subtree test: for every query edge (a, b) with b
/// the parent position of a, the host entries satisfy p[i_b] < p[i_a] and
/// p[l] >= p[i_a] for i_a < l < i_b. Rows use -1 for the empty parent.
bool incident_edge_ok(std::span<const std::int64_t> host_row, std::span<const std::int64_t> query_row,
                      const EmbeddingIndices& idx);

/// Branch partition of T[apex]: one block per child c, holding V(T[c]) ascending.
struct BranchPartition {
  VertexId apex = 0;
  std::vector<std::vector<VertexId>> branches;
};

BranchPartition branch_partition(const ColoredArborescence& tree, VertexId apex);

struct MatchOptions {
  std::size_t cap = 1'000'000;  // candidate sets examined before CandidateExplosion
  bool prune_prefixes = true;    // reject partial index sets early; same first witness
};

/// With prefix pruning the counters include partial index sets, since each
/// stage then runs as soon as its positions are known.
struct SubtreeResult {
  std::optional<EmbeddingIndices> witness;
  std::size_t candidates_examined = 0;
  std::size_t shape_rejections = 0;
  std::size_t incident_rejections = 0;
};

/// Staged test of query against host: color stream, then shape of the first
/// n'-1 parents, then the incident edge property. Returns the
/// lexicographically first witness. Throws CandidateExplosion past the cap.
SubtreeResult match_subarborescence(const Vcpc& query, const Vcpc& host, const MatchOptions& options = {});

std::optional<EmbeddingIndices> is_subarborescence(const Vcpc& query, const Vcpc& host,
                                                   const MatchOptions& options = {});

/// Maps query vertex v'_j to host vertex v_{i_j} using the two prune traces.
/// Result is indexed by query vertex id.
std::vector<VertexId> witness_vertex_map(const PruneTrace& query, const PruneTrace& host,
                                         const EmbeddingIndices& idx);

/// Distinct codes of the underlying tree rooted at each undirected leaf, in
/// ascending leaf order with repeats dropped.
std::vector<Vcpc> leaf_rooting_codes(const ColoredArborescence& tree);

/// Memoizes leaf_rooting_codes keyed by the rooted code of the tree, so
/// isomorphic hosts share one entry. Safe for concurrent use.
class RootingCache {
 public:
  const std::vector<Vcpc>& rootings(const ColoredArborescence& tree);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<Vcpc, std::vector<Vcpc>> entries_;
};

struct UndirectedResult {
  bool is_subtree = false;
  std::size_t rootings_tried = 0;
  std::optional<EmbeddingIndices> witness;  // against the successful rooting
};

/// Roots T1 at its least undirected leaf and tries every leaf rooting of T2.
UndirectedResult undirected_subtree(const ColoredArborescence& t1, const ColoredArborescence& t2,
                                    RootingCache* cache = nullptr, const MatchOptions& options = {});

}  // namespace vcpc
