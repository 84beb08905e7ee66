#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vcpc/codec.hpp"
#include "vcpc/io.hpp"
#include "vcpc/matcher.hpp"

namespace vcpc {

struct IsoClass {
  std::uint32_t class_id = 0;
  Vcpc representative;
  std::vector<std::string> member_ids;
  std::size_t size = 0;
  std::size_t first_member = 0;  // corpus position of the first member

  std::size_t order() const noexcept { return representative.size(); }
};

/// Groups codes by exact equality; class ids follow first appearance.
std::vector<IsoClass> partition_codes(std::span<const Vcpc> codes, std::span<const std::string> ids);

std::vector<IsoClass> partition_by_isomorphism(std::span<const TreeRecord> corpus);

enum class Verdict { Below, NotBelow, Unknown };

/// Outcome of one containment test. The witness maps each element of the
/// lower class's representative to an element of the upper one (code
/// positions for the code path, vertex ids for the reference path).
struct PairOutcome {
  Verdict verdict = Verdict::NotBelow;
  std::vector<std::uint32_t> witness;
  std::size_t candidates = 0;
  std::string diagnostic;
};

/// Tests whether class `lower` is below class `upper` (indices into classes).
using PairTester = std::function<PairOutcome(std::size_t lower, std::size_t upper)>;

/// Verdicts keyed by the two representative codes. Unknown verdicts are never stored.
class PairCache {
 public:
  std::optional<PairOutcome> find(const Vcpc& lower, const Vcpc& upper) const;
  void store(const Vcpc& lower, const Vcpc& upper, const PairOutcome& outcome);
  std::size_t size() const;

  /// JSONL: {"below": code, "above": code, "verdict": "below"|"not_below", "witness": [...]}
  void load(std::istream& in);
  void save(std::ostream& out) const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<Vcpc, Vcpc>, PairOutcome> entries_;
};

struct PosetOptions {
  std::size_t workers = 1;
  PairCache* cache = nullptr;
};

struct PosetStats {
  std::size_t pairs_total = 0;     // ordered pairs of distinct classes
  std::size_t size_filtered = 0;   // decided by vertex counts alone
  std::size_t computed = 0;        // tester invocations
  std::size_t cached = 0;          // answered by the pair cache
  std::size_t implied = 0;         // skipped by transitivity
  std::size_t unknown = 0;
};

struct PosetEdge {
  std::uint32_t below = 0;
  std::uint32_t above = 0;
  std::vector<std::uint32_t> witness;
  std::optional<std::uint32_t> via;  // intermediate class for implied edges
};

struct UnknownPair {
  std::uint32_t below = 0;
  std::uint32_t above = 0;
  std::string diagnostic;
};

class CorpusPoset {
 public:
  CorpusPoset() = default;
  CorpusPoset(std::vector<IsoClass> classes, std::vector<PosetEdge> edges, std::vector<UnknownPair> unknown,
              PosetStats stats);

  const std::vector<IsoClass>& classes() const noexcept { return classes_; }
  /// Reflexive containment relation between class ids.
  bool below(std::uint32_t a, std::uint32_t b) const;
  /// Strict relation, sorted by (below, above).
  const std::vector<PosetEdge>& edges() const noexcept { return edges_; }
  const std::vector<UnknownPair>& unknown_pairs() const noexcept { return unknown_; }
  const PosetStats& stats() const noexcept { return stats_; }

 private:
  std::vector<IsoClass> classes_;
  std::vector<PosetEdge> edges_;
  std::vector<UnknownPair> unknown_;
  PosetStats stats_;
  std::vector<std::vector<std::uint64_t>> rows_;
};

/// Decides the containment relation between all classes. Pairs run in waves
/// of increasing vertex-count gap; within a wave they are independent, so the
/// workers only ever skip pairs implied by verdicts committed in earlier waves.
/// Distinct classes of equal order are never related.
CorpusPoset build_poset(std::vector<IsoClass> classes, const PairTester& tester, const PosetOptions& options = {});

/// build_poset with the staged code matcher as tester. CandidateExplosion
/// becomes an unknown pair.
CorpusPoset subtree_poset(std::vector<IsoClass> classes, const MatchOptions& match = {},
                          const PosetOptions& options = {});

enum class CorpusErrorKind { NoEligibleClass };

class CorpusError : public std::runtime_error {
 public:
  CorpusError(CorpusErrorKind kind, const std::string& detail);
  CorpusErrorKind kind() const noexcept { return kind_; }

 private:
  CorpusErrorKind kind_;
};

struct Representative {
  std::uint32_t class_id = 0;
  std::size_t count = 0;          // corpus trees containing the class, its own members included
  std::size_t unknown_pairs = 0;  // pairs involving the class left undecided
};

/// Class of order <= max_order contained in the most corpus trees; ties go to
/// the smaller class id. Throws NoEligibleClass.
Representative most_representative(const CorpusPoset& poset, std::size_t max_order);

/// Per-class containment counts, indexed by class id.
std::vector<std::size_t> containment_counts(const CorpusPoset& poset);

}  // namespace vcpc
