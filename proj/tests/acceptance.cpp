// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Optional argv[1] names a file for the unordered-divergence report.

#include <chrono>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "figures.hpp"
#include "support.hpp"
#include "vcpc/canonical.hpp"
#include "vcpc/cli.hpp"
#include "vcpc/codec.hpp"
#include "vcpc/corpus.hpp"
#include "vcpc/io.hpp"
#include "vcpc/matcher.hpp"
#include "vcpc/oracle.hpp"

using namespace vcpc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few mismatches so a FAIL line says what went wrong.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
  }
  Outcome result(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    std::ostringstream s;
    s << failures_ << " mismatch(es): " << notes_.str();
    return {false, s.str()};
  }

 private:
  std::size_t failures_ = 0;
  std::ostringstream notes_;
};

std::vector<TreeRecord> records(const std::vector<ColoredArborescence>& trees) {
  std::vector<TreeRecord> out;
  for (std::size_t i = 0; i < trees.size(); ++i) out.push_back({"t" + std::to_string(i), trees[i], i + 1});
  return out;
}

std::string show(const Vcpc& c) { return vcpc_to_json(c).dump(); }

Outcome golden_codes() {
  Check check;
  const std::vector<std::tuple<std::string, ColoredArborescence, Vcpc>> cases = {
      {"building", figures::building_vcpc(), figures::building_vcpc_code()},
      {"automorphic left", figures::automorphic_left(), figures::automorphic_code()},
      {"automorphic right", figures::automorphic_right(), figures::automorphic_code()},
      {"pair 1-2 query", figures::pair12_query(), figures::pair12_query_code()},
      {"pair 1 host", figures::pair1_host(), figures::pair1_host_code()},
      {"pair 2 host", figures::pair23_host(), figures::pair23_host_code()},
      {"pair 3 query", figures::pair3_query(), figures::pair3_query_code()},
      {"pair 3 host", figures::pair23_host(), figures::pair23_host_code()},
  };
  for (const auto& [name, tree, expected] : cases) {
    const auto got = encode(tree);
    check.expect(got == expected, name + " gave " + show(got));
  }
  return check.result(std::to_string(cases.size()) + " codes exact");
}

Outcome classical_example() {
  Check check;
  const auto edges = figures::prufer_edges();
  std::vector<Label> labels(7);
  std::iota(labels.begin(), labels.end(), 0U);
  const auto code = classical_prufer(7, edges, labels);
  check.expect(code == figures::prufer_code(), "encode differs");
  std::set<std::pair<Label, Label>> expected, rebuilt;
  auto undirected = [](Label a, Label b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (auto [a, b] : edges) expected.insert(undirected(a, b));
  for (auto [a, b] : classical_prufer_decode(figures::prufer_code())) rebuilt.insert(undirected(a, b));
  check.expect(expected == rebuilt, "decoded edge set differs");
  return check.result("[4,4,1,4,4] and 6 edges recovered");
}

Outcome subtree_verdicts() {
  Check check;
  const auto q12 = figures::pair12_query_code();
  const auto w1 = is_subarborescence(q12, figures::pair1_host_code());
  const auto w2 = is_subarborescence(q12, figures::pair23_host_code());
  check.expect(w1 && w1->indices == std::vector<std::uint32_t>{2, 5, 6, 8, 9}, "pair 1 witness");
  check.expect(w2 && w2->indices == std::vector<std::uint32_t>{3, 4, 5, 7, 8}, "pair 2 witness");
  check.expect(!is_subarborescence(figures::pair3_query_code(), figures::pair23_host_code()), "pair 3 matched");
  check.expect(!is_subarborescence(figures::motivating_query_code(), figures::motivating_host_code()),
               "incident-edge pair matched");
  return check.result("witnesses [2,5,6,8,9] and [3,4,5,7,8]; pair 3 and incident-edge pair rejected");
}

Outcome isomorphism_partition() {
  Check check;
  const auto trees = support::corpus(12, 1000, 7, 4);
  const auto classes = partition_by_isomorphism(records(trees));
  std::map<std::string, std::set<std::string>> brute;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    brute[oracle::brute_canonical(trees[i])].insert("t" + std::to_string(i));
  }
  std::set<std::set<std::string>> ours, theirs;
  for (const auto& c : classes) ours.insert({c.member_ids.begin(), c.member_ids.end()});
  for (auto& [key, members] : brute) theirs.insert(members);
  check.expect(ours == theirs, std::to_string(ours.size()) + " vs " + std::to_string(theirs.size()) + " classes");
  return check.result(std::to_string(classes.size()) + " classes identical");
}

Outcome round_trip() {
  Check check;
  const auto trees = support::corpus(12, 1000, 7, 5);
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto& t = trees[i];
    check.expect(decode(encode(t)) == canonical_relabel(t), "decode tree " + std::to_string(i));
    const auto rebuilt = reconstruct(full_ld_array(t));
    check.expect(oracle::brute_canonical(rebuilt) == oracle::brute_canonical(t), "reconstruct tree " + std::to_string(i));
  }
  return check.result("1000 trees");
}

Outcome adjacency_lemma() {
  Check check;
  const auto trees = support::corpus(12, 500, 7, 6);
  std::size_t pairs = 0;
  for (std::size_t k = 0; k < trees.size(); ++k) {
    const auto& t = trees[k];
    const auto [code, trace] = encode(t, canonical_order(t));
    const std::size_t n = t.size();
    std::set<std::pair<VertexId, VertexId>> from_code, from_trace;
    // Edges into the root have no code position for the parent; the full
    // recovery below covers them.
    for (std::size_t j = 1; j + 1 < n; ++j) {
      for (std::size_t i = 0; i < j; ++i, ++pairs) {
        if (code_adjacent(code, i, j)) from_code.insert({trace.pruned[j], trace.pruned[i]});
      }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (trace.parent_of[i] != trace.pruned[n - 1]) from_trace.insert({trace.parent_of[i], trace.pruned[i]});
    }
    check.expect(from_code == from_trace, "tree " + std::to_string(k) + " non-root edges");
    std::set<std::pair<VertexId, VertexId>> recovered, expected;
    for (auto [p, c] : recover_edges(code)) recovered.insert({trace.pruned[p], trace.pruned[c]});
    for (auto [p, c] : t.edges()) expected.insert({p, c});
    check.expect(recovered == expected, "tree " + std::to_string(k) + " full edge set");
  }
  return check.result("500 trees, " + std::to_string(pairs) + " index pairs");
}

Outcome subtree_oracle(const std::string& report_path) {
  Check check;
  const auto trees = support::corpus(8, 200, 4, 7);
  const auto poset = subtree_poset(partition_by_isomorphism(records(trees)));
  check.expect(poset.unknown_pairs().empty(), "candidate cap hit");
  const auto& cls = poset.classes();
  std::vector<ColoredArborescence> reps;
  for (const auto& c : cls) reps.push_back(decode(c.representative));
  std::ofstream report;
  if (!report_path.empty()) report.open(report_path);
  std::size_t positives = 0, divergent = 0;
  for (std::size_t a = 0; a < cls.size(); ++a) {
    for (std::size_t b = 0; b < cls.size(); ++b) {
      if (a == b) continue;
      const bool ordered = oracle::has_embedding(reps[a], reps[b], true);
      const bool got = poset.below(cls[a].class_id, cls[b].class_id);
      check.expect(got == ordered, "classes " + std::to_string(a) + " < " + std::to_string(b));
      positives += ordered;
      if (!ordered && oracle::has_embedding(reps[a], reps[b], false)) {
        ++divergent;
        Json line = {{"below", cls[a].class_id},
                     {"above", cls[b].class_id},
                     {"code_verdict", got},
                     {"ordered_oracle", ordered},
                     {"unordered_oracle", true},
                     {"below_tree", tree_to_json(reps[a], "below")},
                     {"above_tree", tree_to_json(reps[b], "above")}};
        if (report.is_open()) report << line.dump() << '\n';
      }
    }
  }
  std::ostringstream s;
  s << cls.size() << " classes, " << positives << " related pairs, " << divergent
    << " pairs related only without sibling order";
  if (report.is_open()) s << " (listed in " << report_path << ")";
  return check.result(s.str());
}

Outcome bench_sanity() {
  std::istringstream in;
  std::ostringstream out, err;
  const int code = cli::run({"bench", "--m", "8", "--n", "1000", "--c", "4", "--seed", "8"}, in, out, err);
  Check check;
  check.expect(code == 0, "exit " + std::to_string(code) + " " + err.str());
  if (code != 0) return check.result("");
  const auto report = Json::parse(out.str());
  check.expect(report.at("partitions_identical").get<bool>(), "partitions differ");
  check.expect(report.at("verdicts_identical").get<bool>(), "verdicts differ");
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << "code path " << report["vcpc"]["total_seconds"].get<double>()
    << " s, oracle path " << report["oracle"]["total_seconds"].get<double>() << " s, "
    << report["classes"].get<std::size_t>() << " classes, " << report["below_pairs"].get<std::size_t>()
    << " related pairs";
  return check.result(s.str());
}

Outcome representative_count() {
  Check check;
  const auto trees = support::corpus(8, 50, 3, 9);
  const auto poset = subtree_poset(partition_by_isomorphism(records(trees)));
  const auto counts = containment_counts(poset);
  std::vector<std::size_t> direct(poset.classes().size());
  for (const auto& c : poset.classes()) {
    const auto rep = decode(c.representative);
    for (const auto& t : trees) direct[c.class_id] += oracle::has_embedding(rep, t, true);
    check.expect(counts[c.class_id] == direct[c.class_id], "count of class " + std::to_string(c.class_id));
  }
  std::ostringstream s;
  for (std::size_t k : {1, 3, 5, 8}) {
    std::size_t best = 0;
    std::uint32_t best_id = 0;
    for (const auto& c : poset.classes()) {
      if (c.order() <= k && direct[c.class_id] > best) {
        best = direct[c.class_id];
        best_id = c.class_id;
      }
    }
    const auto r = most_representative(poset, k);
    check.expect(r.class_id == best_id && r.count == best, "max order " + std::to_string(k));
    s << (k == 1 ? "" : ", ") << "K=" << k << ": class " << r.class_id << " in " << r.count << " trees";
  }
  return check.result(s.str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string report_path = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"golden codes", golden_codes},
      {"classical code example", classical_example},
      {"subtree verdicts on the drawn pairs", subtree_verdicts},
      {"isomorphism partition vs brute force (m=12 N=1000 C=7)", isomorphism_partition},
      {"decode and reconstruct round trips (1000 trees)", round_trip},
      {"code adjacency vs prune trace (500 trees)", adjacency_lemma},
      {"subtree poset vs ordered oracle (200 trees m=8 C=4)", [&] { return subtree_oracle(report_path); }},
      {"bench verdict matrices (m=8 N=1000 C=4)", bench_sanity},
      {"most representative vs exhaustive count (50 trees m=8 C=3)", representative_count},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << ' ' << (o.pass ? "PASS" : "FAIL") << " [" << std::fixed
              << std::setprecision(2) << secs << " s] " << criteria[i].first << ": " << o.detail << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
