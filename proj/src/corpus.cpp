#include "vcpc/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <thread>
#include <tuple>
#include <unordered_map>

namespace vcpc {

std::vector<IsoClass> partition_codes(std::span<const Vcpc> codes, std::span<const std::string> ids) {
  std::vector<IsoClass> classes;
  std::map<Vcpc, std::size_t> index;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    auto [it, fresh] = index.try_emplace(codes[i], classes.size());
    if (fresh) {
      IsoClass c;
      c.class_id = static_cast<std::uint32_t>(classes.size());
      c.representative = codes[i];
      c.first_member = i;
      classes.push_back(std::move(c));
    }
    IsoClass& c = classes[it->second];
    c.member_ids.push_back(i < ids.size() ? ids[i] : std::to_string(i));
    ++c.size;
  }
  return classes;
}

std::vector<IsoClass> partition_by_isomorphism(std::span<const TreeRecord> corpus) {
  std::vector<Vcpc> codes;
  std::vector<std::string> ids;
  codes.reserve(corpus.size());
  ids.reserve(corpus.size());
  for (const auto& rec : corpus) {
    codes.push_back(encode(rec.tree));
    ids.push_back(rec.id);
  }
  return partition_codes(codes, ids);
}

std::optional<PairOutcome> PairCache::find(const Vcpc& lower, const Vcpc& upper) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find({lower, upper});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void PairCache::store(const Vcpc& lower, const Vcpc& upper, const PairOutcome& outcome) {
  if (outcome.verdict == Verdict::Unknown) return;
  std::lock_guard lock(mutex_);
  entries_.insert_or_assign({lower, upper}, outcome);
}

std::size_t PairCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

void PairCache::load(std::istream& in) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(line, std::string("pair cache: ") + e.what());
    }
    if (!j.is_object() || !j.contains("below") || !j.contains("above") || !j.contains("verdict")) {
      throw ParseError(line, "pair cache record needs below, above and verdict");
    }
    PairOutcome outcome;
    const auto verdict = j["verdict"].get<std::string>();
    if (verdict == "below") {
      outcome.verdict = Verdict::Below;
    } else if (verdict == "not_below") {
      outcome.verdict = Verdict::NotBelow;
    } else {
      throw ParseError(line, "unknown verdict \"" + verdict + "\"");
    }
    if (auto it = j.find("witness"); it != j.end() && it->is_array()) {
      outcome.witness = it->get<std::vector<std::uint32_t>>();
    }
    store(vcpc_from_json(j["below"], line), vcpc_from_json(j["above"], line), outcome);
  }
}

void PairCache::save(std::ostream& out) const {
  std::lock_guard lock(mutex_);
  for (const auto& [key, outcome] : entries_) {
    Json j;
    j["below"] = vcpc_to_json(key.first);
    j["above"] = vcpc_to_json(key.second);
    j["verdict"] = outcome.verdict == Verdict::Below ? "below" : "not_below";
    j["witness"] = outcome.witness;
    out << dump_line(j) << '\n';
  }
}

namespace {

class BitMatrix {
 public:
  explicit BitMatrix(std::size_t n) : words_((n + 63) / 64), bits_(n * words_, 0) {}

  void set(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64); }
  bool test(std::size_t r, std::size_t c) const { return (bits_[r * words_ + c / 64] >> (c % 64)) & 1U; }

  // Smallest c with this(r, c) and other(s, c).
  std::optional<std::size_t> first_common(std::size_t r, const BitMatrix& other, std::size_t s) const {
    for (std::size_t w = 0; w < words_; ++w) {
      const std::uint64_t both = bits_[r * words_ + w] & other.bits_[s * words_ + w];
      if (both != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(both));
    }
    return std::nullopt;
  }

 private:
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

std::vector<std::uint32_t> compose(std::span<const std::uint32_t> first, std::span<const std::uint32_t> second) {
  std::vector<std::uint32_t> out;
  out.reserve(first.size());
  for (std::uint32_t x : first) out.push_back(second[x]);
  return out;
}

void run_parallel(std::size_t tasks, std::size_t workers, const std::function<void(std::size_t)>& body) {
  workers = std::max<std::size_t>(1, std::min(workers, tasks));
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

CorpusPoset build_poset(std::vector<IsoClass> classes, const PairTester& tester, const PosetOptions& options) {
  std::sort(classes.begin(), classes.end(), [](const IsoClass& a, const IsoClass& b) { return a.class_id < b.class_id; });
  const std::size_t k = classes.size();
  PosetStats stats;
  stats.pairs_total = k == 0 ? 0 : k * (k - 1);

  // rows(a, b): a below b; cols(b, a): the transpose, for implication lookups.
  BitMatrix rows(k);
  BitMatrix cols(k);
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint32_t>> witnesses;
  std::vector<PosetEdge> edges;
  std::vector<UnknownPair> unknown;

  std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> waves;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      if (classes[a].order() >= classes[b].order()) {
        ++stats.size_filtered;
        continue;
      }
      waves[classes[b].order() - classes[a].order()].emplace_back(a, b);
    }
  }

  auto commit_below = [&](std::size_t a, std::size_t b, std::vector<std::uint32_t> witness,
                          std::optional<std::uint32_t> via) {
    rows.set(a, b);
    cols.set(b, a);
    edges.push_back({classes[a].class_id, classes[b].class_id, witness, via});
    witnesses.emplace(std::make_pair(a, b), std::move(witness));
  };

  for (auto& [gap, pairs] : waves) {
    // Verdicts of this wave rely only on earlier waves: any intermediate class
    // splits the gap into two strictly smaller positive gaps.
    struct Pending {
      std::size_t a;
      std::size_t b;
      PairOutcome outcome;
      bool cached = false;
    };
    std::vector<Pending> todo;
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> implied;
    for (auto [a, b] : pairs) {
      if (auto c = rows.first_common(a, cols, b)) {
        implied.push_back({{a, b}, *c});
        continue;
      }
      Pending p{a, b, {}, false};
      if (options.cache != nullptr) {
        if (auto hit = options.cache->find(classes[a].representative, classes[b].representative)) {
          p.outcome = std::move(*hit);
          p.cached = true;
        }
      }
      todo.push_back(std::move(p));
    }
    std::vector<std::size_t> to_compute;
    for (std::size_t i = 0; i < todo.size(); ++i) {
      if (!todo[i].cached) to_compute.push_back(i);
    }
    run_parallel(to_compute.size(), options.workers, [&](std::size_t t) {
      Pending& p = todo[to_compute[t]];
      p.outcome = tester(p.a, p.b);
    });

    for (auto& [ab, c] : implied) {
      auto [a, b] = ab;
      ++stats.implied;
      commit_below(a, b, compose(witnesses.at({a, c}), witnesses.at({c, b})), classes[c].class_id);
    }
    for (Pending& p : todo) {
      if (p.cached) {
        ++stats.cached;
      } else {
        ++stats.computed;
        if (options.cache != nullptr) {
          options.cache->store(classes[p.a].representative, classes[p.b].representative, p.outcome);
        }
      }
      switch (p.outcome.verdict) {
        case Verdict::Below: commit_below(p.a, p.b, std::move(p.outcome.witness), std::nullopt); break;
        case Verdict::NotBelow: break;
        case Verdict::Unknown:
          ++stats.unknown;
          unknown.push_back({classes[p.a].class_id, classes[p.b].class_id, p.outcome.diagnostic});
          break;
      }
    }
  }

  std::sort(edges.begin(), edges.end(), [](const PosetEdge& x, const PosetEdge& y) {
    return std::tie(x.below, x.above) < std::tie(y.below, y.above);
  });
  std::sort(unknown.begin(), unknown.end(), [](const UnknownPair& x, const UnknownPair& y) {
    return std::tie(x.below, x.above) < std::tie(y.below, y.above);
  });
  return CorpusPoset(std::move(classes), std::move(edges), std::move(unknown), stats);
}

CorpusPoset::CorpusPoset(std::vector<IsoClass> classes, std::vector<PosetEdge> edges, std::vector<UnknownPair> unknown,
                         PosetStats stats)
    : classes_(std::move(classes)), edges_(std::move(edges)), unknown_(std::move(unknown)), stats_(stats) {
  std::uint32_t max_id = 0;
  for (const auto& c : classes_) max_id = std::max(max_id, c.class_id);
  const std::size_t k = classes_.empty() ? 0 : max_id + 1;
  rows_.assign(k, std::vector<std::uint64_t>((k + 63) / 64, 0));
  for (const auto& e : edges_) rows_.at(e.below).at(e.above / 64) |= std::uint64_t{1} << (e.above % 64);
}

bool CorpusPoset::below(std::uint32_t a, std::uint32_t b) const {
  if (a == b) return true;
  if (a >= rows_.size() || b >= rows_.size()) return false;
  return (rows_[a][b / 64] >> (b % 64)) & 1U;
}

CorpusPoset subtree_poset(std::vector<IsoClass> classes, const MatchOptions& match, const PosetOptions& options) {
  std::sort(classes.begin(), classes.end(), [](const IsoClass& a, const IsoClass& b) { return a.class_id < b.class_id; });
  // The tester reads the class table by position, which build_poset keeps
  // because the classes are already sorted by id.
  const std::vector<IsoClass>& table = classes;
  std::vector<Vcpc> reps;
  reps.reserve(table.size());
  for (const auto& c : table) reps.push_back(c.representative);
  PairTester tester = [&reps, &match](std::size_t lower, std::size_t upper) {
    PairOutcome out;
    try {
      SubtreeResult r = match_subarborescence(reps[lower], reps[upper], match);
      out.candidates = r.candidates_examined;
      if (r.witness) {
        out.verdict = Verdict::Below;
        out.witness = std::move(r.witness->indices);
      }
    } catch (const MatcherError& e) {
      if (e.kind() != MatcherErrorKind::CandidateExplosion) throw;
      out.verdict = Verdict::Unknown;
      out.diagnostic = e.what();
    }
    return out;
  };
  return build_poset(std::move(classes), tester, options);
}

CorpusError::CorpusError(CorpusErrorKind kind, const std::string& detail)
    : std::runtime_error("NoEligibleClass: " + detail), kind_(kind) {}

std::vector<std::size_t> containment_counts(const CorpusPoset& poset) {
  std::unordered_map<std::uint32_t, std::size_t> size_of;
  std::uint32_t max_id = 0;
  for (const auto& c : poset.classes()) {
    size_of[c.class_id] = c.size;
    max_id = std::max(max_id, c.class_id);
  }
  std::vector<std::size_t> counts(poset.classes().empty() ? 0 : max_id + 1, 0);
  for (const auto& c : poset.classes()) counts[c.class_id] = c.size;
  for (const auto& e : poset.edges()) counts[e.below] += size_of.at(e.above);
  return counts;
}

Representative most_representative(const CorpusPoset& poset, std::size_t max_order) {
  const auto counts = containment_counts(poset);
  std::optional<Representative> best;
  for (const auto& c : poset.classes()) {
    if (c.order() > max_order) continue;
    if (!best || counts[c.class_id] > best->count ||
        (counts[c.class_id] == best->count && c.class_id < best->class_id)) {
      best = Representative{c.class_id, counts[c.class_id], 0};
    }
  }
  if (!best) {
    throw CorpusError(CorpusErrorKind::NoEligibleClass,
                      "no class has at most " + std::to_string(max_order) + " vertices");
  }
  for (const auto& u : poset.unknown_pairs()) {
    if (u.below == best->class_id || u.above == best->class_id) ++best->unknown_pairs;
  }
  return *best;
}

}  // namespace vcpc
