#include "vcpc/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "vcpc/canonical.hpp"
#include "vcpc/codec.hpp"
#include "vcpc/corpus.hpp"
#include "vcpc/io.hpp"
#include "vcpc/matcher.hpp"
#include "vcpc/oracle.hpp"

namespace vcpc::cli {

namespace {

// Failure that maps straight onto an exit code.
struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Input {
 public:
  Input(const std::string& path, std::istream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ifstream>(path);
      if (!*file_) throw InputFailure("cannot open " + path);
      stream_ = file_.get();
    }
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

std::optional<ColorTable> read_color_table(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream f(path);
  if (!f) throw InputFailure("cannot open color table " + path);
  return load_color_table(f);
}

const ColorTable* table_ptr(const std::optional<ColorTable>& t) { return t ? &*t : nullptr; }

struct Common {
  std::string input = "-";
  std::string colors;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("input", common.input, "JSONL corpus path, - for stdin");
  cmd->add_option("--colors", common.colors, "JSON color table mapping names to integers");
}

std::vector<TreeRecord> read_corpus(const Common& common, std::istream& in) {
  Input input(common.input, in);
  auto table = read_color_table(common.colors);
  return parse_corpus(input.get(), table_ptr(table));
}

Json class_json(const IsoClass& c) {
  Json j;
  j["class_id"] = c.class_id;
  j["code"] = vcpc_to_json(c.representative);
  j["members"] = c.member_ids;
  j["size"] = c.size;
  return j;
}

// First nonblank record of a file: either a code ({"parents", ...}) or a tree.
struct Single {
  std::optional<ColoredArborescence> tree;
  Vcpc code;
};

Single read_single(const std::string& path, const ColorTable* table) {
  std::ifstream f(path);
  if (!f) throw InputFailure("cannot open " + path);
  std::string text;
  std::size_t line = 0;
  while (std::getline(f, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(line, e.what());
    }
    Single s;
    if (j.is_object() && j.contains("parents")) {
      s.code = vcpc_from_json(j, line);
      validate_code(s.code);
    } else {
      s.tree = parse_tree_line(text, line, table).tree;
      s.code = encode(*s.tree);
    }
    return s;
  }
  throw InputFailure(path + " holds no record");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Json stats_json(const PosetStats& s) {
  Json j;
  j["pairs_total"] = s.pairs_total;
  j["size_filtered"] = s.size_filtered;
  j["computed"] = s.computed;
  j["cached"] = s.cached;
  j["implied"] = s.implied;
  j["unknown"] = s.unknown;
  return j;
}

struct PosetFlags {
  std::size_t cap = 1'000'000;
  std::size_t workers = 1;
  bool strict = false;
  std::string cache;
};

void add_poset_flags(CLI::App* cmd, PosetFlags& flags) {
  cmd->add_option("--cap", flags.cap, "candidate index sets per pair before giving up")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", flags.workers, "worker threads for pair tests")->check(CLI::PositiveNumber);
  cmd->add_option("--cache", flags.cache, "JSONL pair cache, read if present and rewritten");
}

CorpusPoset compute_poset(std::vector<IsoClass> classes, const PosetFlags& flags) {
  PairCache cache;
  if (!flags.cache.empty()) {
    std::ifstream f(flags.cache);
    if (f) cache.load(f);
  }
  PosetOptions options;
  options.workers = flags.workers;
  options.cache = flags.cache.empty() ? nullptr : &cache;
  MatchOptions match;
  match.cap = flags.cap;
  CorpusPoset poset = subtree_poset(std::move(classes), match, options);
  if (!flags.cache.empty()) {
    std::ofstream f(flags.cache);
    if (!f) throw InputFailure("cannot write pair cache " + flags.cache);
    cache.save(f);
  }
  return poset;
}

int cmd_canon(const Common& common, std::istream& in, std::ostream& out) {
  Input input(common.input, in);
  auto table = read_color_table(common.colors);
  CorpusReader reader(input.get(), table_ptr(table));
  while (auto rec = reader.next()) out << dump_line(full_ld_to_json(full_ld_array(rec->tree))) << '\n';
  return kExitOk;
}

int cmd_encode(const Common& common, std::istream& in, std::ostream& out) {
  Input input(common.input, in);
  auto table = read_color_table(common.colors);
  CorpusReader reader(input.get(), table_ptr(table));
  while (auto rec = reader.next()) out << dump_line(vcpc_to_json(encode(rec->tree), rec->id)) << '\n';
  return kExitOk;
}

int cmd_decode(const std::string& path, bool strict, std::istream& in, std::ostream& out) {
  Input input(path, in);
  std::string text;
  std::size_t line = 0;
  while (std::getline(input.get(), text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(line, e.what());
    }
    const Vcpc code = vcpc_from_json(j, line);
    ColoredArborescence tree = [&] {
      try {
        return decode(code, strict ? DecodeMode::Strict : DecodeMode::Lenient);
      } catch (const CodecError& e) {
        throw InputFailure("line " + std::to_string(line) + ": " + e.what());
      }
    }();
    std::string id = std::to_string(line);
    if (auto it = j.find("id"); it != j.end() && !it->is_null()) id = it->is_string() ? it->get<std::string>() : it->dump();
    out << dump_line(tree_to_json(tree, id)) << '\n';
  }
  return kExitOk;
}

int cmd_iso_classes(const Common& common, std::istream& in, std::ostream& out) {
  for (const auto& c : partition_by_isomorphism(read_corpus(common, in))) out << dump_line(class_json(c)) << '\n';
  return kExitOk;
}

int cmd_poset(const Common& common, const PosetFlags& flags, std::istream& in, std::ostream& out, std::ostream& err) {
  CorpusPoset poset = compute_poset(partition_by_isomorphism(read_corpus(common, in)), flags);
  for (const auto& e : poset.edges()) {
    Json j;
    j["below"] = e.below;
    j["above"] = e.above;
    j["witness"] = e.witness;
    out << dump_line(j) << '\n';
  }
  Json trailer;
  Json unknown = Json::array();
  for (const auto& u : poset.unknown_pairs()) {
    unknown.push_back({{"below", u.below}, {"above", u.above}, {"diagnostic", u.diagnostic}});
  }
  trailer["unknown_pairs"] = std::move(unknown);
  trailer["classes"] = poset.classes().size();
  trailer["stats"] = stats_json(poset.stats());
  out << dump_line(trailer) << '\n';
  if (flags.strict && !poset.unknown_pairs().empty()) {
    err << poset.unknown_pairs().size() << " pair(s) left undecided\n";
    return kExitIncomplete;
  }
  return kExitOk;
}

int cmd_most_common(const Common& common, const PosetFlags& flags, std::size_t max_order, std::istream& in,
                    std::ostream& out, std::ostream& err) {
  CorpusPoset poset = compute_poset(partition_by_isomorphism(read_corpus(common, in)), flags);
  Representative best;
  try {
    best = most_representative(poset, max_order);
  } catch (const CorpusError& e) {
    err << e.what() << '\n';
    return kExitNoResult;
  }
  const IsoClass& c = poset.classes().at(best.class_id);
  Json j = class_json(c);
  j["order"] = c.order();
  j["count"] = best.count;
  j["unknown_pairs"] = best.unknown_pairs;
  out << dump_line(j) << '\n';
  return kExitOk;
}

int cmd_gen(const oracle::GenParams& params, std::ostream& out) {
  oracle::validate(params);
  for (std::size_t i = 0; i < params.n; ++i) {
    Json j = tree_to_json(oracle::random_tree(params, i), std::to_string(i));
    j["generator"] = oracle::kGeneratorId;
    out << dump_line(j) << '\n';
  }
  return kExitOk;
}

std::vector<IsoClass> oracle_partition(std::span<const ColoredArborescence> trees) {
  // Classes by first appearance of each brute-force key; the representative
  // code slot carries the class's first tree encoded only for reporting.
  std::vector<IsoClass> classes;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    auto [it, fresh] = index.try_emplace(oracle::brute_canonical(trees[i]), classes.size());
    if (fresh) {
      IsoClass c;
      c.class_id = static_cast<std::uint32_t>(classes.size());
      c.first_member = i;
      c.representative.colors.assign(trees[i].size(), 0);
      c.representative.parents.assign(trees[i].size(), std::nullopt);
      classes.push_back(std::move(c));
    }
    classes[it->second].member_ids.push_back(std::to_string(i));
    ++classes[it->second].size;
  }
  return classes;
}

int cmd_bench(const oracle::GenParams& params, const PosetFlags& flags, std::ostream& out) {
  oracle::validate(params);
  const auto trees = oracle::random_corpus(params);
  Json report;
  report["params"] = {{"m", params.m}, {"n", params.n}, {"c", params.c}, {"seed", params.seed},
                      {"workers", flags.workers}, {"cap", flags.cap}};
  report["generator"] = oracle::kGeneratorId;

  auto t0 = std::chrono::steady_clock::now();
  std::vector<Vcpc> codes;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    codes.push_back(encode(trees[i]));
    ids.push_back(std::to_string(i));
  }
  auto vcpc_classes = partition_codes(codes, ids);
  const double vcpc_partition = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  MatchOptions match;
  match.cap = flags.cap;
  PosetOptions popts;
  popts.workers = flags.workers;
  CorpusPoset vcpc_poset = subtree_poset(vcpc_classes, match, popts);
  const double vcpc_poset_time = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  auto oracle_classes = oracle_partition(trees);
  const double oracle_partition_time = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  std::vector<const ColoredArborescence*> reps;
  for (const auto& c : oracle_classes) reps.push_back(&trees[c.first_member]);
  PairTester tester = [&reps](std::size_t lower, std::size_t upper) {
    PairOutcome o;
    try {
      oracle::EmbeddingSearch search{true, 10'000'000, 1};
      auto found = oracle::enumerate_embeddings(*reps[lower], *reps[upper], search);
      if (!found.empty()) {
        o.verdict = Verdict::Below;
        o.witness.assign(found.front().begin(), found.front().end());
      }
    } catch (const oracle::SearchBudgetExceeded& e) {
      o.verdict = Verdict::Unknown;
      o.diagnostic = e.what();
    }
    return o;
  };
  CorpusPoset oracle_poset = build_poset(oracle_classes, tester, popts);
  const double oracle_poset_time = seconds_since(t0);

  bool partitions_identical = vcpc_classes.size() == oracle_classes.size();
  for (std::size_t i = 0; partitions_identical && i < vcpc_classes.size(); ++i) {
    partitions_identical = vcpc_classes[i].member_ids == oracle_classes[i].member_ids;
  }
  bool verdicts_identical = partitions_identical && vcpc_poset.unknown_pairs().empty() &&
                            oracle_poset.unknown_pairs().empty();
  std::size_t below_pairs = 0;
  for (std::uint32_t a = 0; verdicts_identical && a < vcpc_classes.size(); ++a) {
    for (std::uint32_t b = 0; b < vcpc_classes.size(); ++b) {
      if (vcpc_poset.below(a, b) != oracle_poset.below(a, b)) verdicts_identical = false;
      if (a != b && vcpc_poset.below(a, b)) ++below_pairs;
    }
  }

  auto path = [](double partition, double poset, const PosetStats& stats) {
    Json j;
    j["partition_seconds"] = partition;
    j["poset_seconds"] = poset;
    j["total_seconds"] = partition + poset;
    j["stats"] = stats_json(stats);
    return j;
  };
  report["trees"] = trees.size();
  report["classes"] = vcpc_classes.size();
  report["below_pairs"] = below_pairs;
  report["vcpc"] = path(vcpc_partition, vcpc_poset_time, vcpc_poset.stats());
  report["oracle"] = path(oracle_partition_time, oracle_poset_time, oracle_poset.stats());
  report["oracle"]["method"] = "brute-force keys + ordered backtracking embeddings";
  const double vcpc_total = vcpc_partition + vcpc_poset_time;
  report["ratio_oracle_over_vcpc"] =
      vcpc_total > 0 ? Json((oracle_partition_time + oracle_poset_time) / vcpc_total) : Json(nullptr);
  report["partitions_identical"] = partitions_identical;
  report["verdicts_identical"] = verdicts_identical;
  out << report.dump(2) << '\n';
  return kExitOk;
}

Json witness_json(const std::optional<EmbeddingIndices>& w) {
  return w ? Json(w->indices) : Json(nullptr);
}

int cmd_subtree(const std::string& a, const std::string& b, const std::string& colors, std::size_t cap, bool no_prune,
                std::ostream& out, std::ostream& err) {
  auto table = read_color_table(colors);
  const Single query = read_single(a, table_ptr(table));
  const Single host = read_single(b, table_ptr(table));
  MatchOptions options;
  options.cap = cap;
  options.prune_prefixes = !no_prune;
  Json j;
  try {
    SubtreeResult r = match_subarborescence(query.code, host.code, options);
    j["is_subtree"] = r.witness.has_value();
    j["witness"] = witness_json(r.witness);
    j["candidates_examined"] = r.candidates_examined;
  } catch (const MatcherError& e) {
    if (e.kind() != MatcherErrorKind::CandidateExplosion) throw;
    j["is_subtree"] = nullptr;
    j["witness"] = nullptr;
    j["candidates_examined"] = cap;
    out << dump_line(j) << '\n';
    err << e.what() << '\n';
    return kExitIncomplete;
  }
  out << dump_line(j) << '\n';
  return kExitOk;
}

int cmd_subtree_undirected(const std::string& a, const std::string& b, const std::string& colors, std::size_t cap,
                           std::ostream& out, std::ostream& err) {
  auto table = read_color_table(colors);
  const Single s1 = read_single(a, table_ptr(table));
  const Single s2 = read_single(b, table_ptr(table));
  const ColoredArborescence t1 = s1.tree ? *s1.tree : decode(s1.code);
  const ColoredArborescence t2 = s2.tree ? *s2.tree : decode(s2.code);
  MatchOptions options;
  options.cap = cap;
  try {
    UndirectedResult r = undirected_subtree(t1, t2, nullptr, options);
    Json j;
    j["is_subtree"] = r.is_subtree;
    j["witness"] = witness_json(r.witness);
    j["rootings_tried"] = r.rootings_tried;
    out << dump_line(j) << '\n';
  } catch (const MatcherError& e) {
    if (e.kind() != MatcherErrorKind::CandidateExplosion) throw;
    err << e.what() << '\n';
    return kExitIncomplete;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vertex-colored Prüfer codes for colored arborescences", "vcpc"};
  app.require_subcommand(1);

  Common canon_opts, encode_opts, iso_opts, poset_opts, most_opts;
  auto* canon = app.add_subcommand("canon", "Full LD_A descriptor per tree");
  add_common(canon, canon_opts);
  auto* enc = app.add_subcommand("encode", "VCPC per tree");
  add_common(enc, encode_opts);

  std::string decode_input = "-";
  bool strict = false;
  auto* dec = app.add_subcommand("decode", "Trees from VCPC records");
  dec->add_option("input", decode_input, "JSONL code path, - for stdin");
  dec->add_flag("--strict", strict, "reject codes that are not canonical");

  auto* iso = app.add_subcommand("iso-classes", "Isomorphism classes of a corpus");
  add_common(iso, iso_opts);

  PosetFlags poset_flags;
  auto* poset = app.add_subcommand("poset", "Subtree order between isomorphism classes");
  add_common(poset, poset_opts);
  add_poset_flags(poset, poset_flags);
  poset->add_flag("--strict-poset", poset_flags.strict, "exit 3 when some pair stays undecided");

  PosetFlags most_flags;
  std::size_t max_order = 20;
  auto* most = app.add_subcommand("most-common", "Class contained in the most trees");
  add_common(most, most_opts);
  add_poset_flags(most, most_flags);
  most->add_option("--max-order", max_order, "largest class order considered")->check(CLI::PositiveNumber);

  oracle::GenParams gen_params;
  auto* gen = app.add_subcommand("gen", "Seeded random corpus");
  gen->add_option("--m", gen_params.m, "largest tree order")->check(CLI::PositiveNumber);
  gen->add_option("--n", gen_params.n, "number of trees")->check(CLI::PositiveNumber);
  gen->add_option("--c", gen_params.c, "number of colors")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_params.seed, "64-bit seed");

  oracle::GenParams bench_params{8, 1000, 4, 1};
  PosetFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Time the code path against the brute-force path");
  bench->add_option("--m", bench_params.m, "largest tree order")->check(CLI::PositiveNumber);
  bench->add_option("--n", bench_params.n, "number of trees")->check(CLI::PositiveNumber);
  bench->add_option("--c", bench_params.c, "number of colors")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_params.seed, "64-bit seed");
  add_poset_flags(bench, bench_flags);

  std::string sub_a, sub_b, sub_colors;
  std::size_t sub_cap = 1'000'000;
  bool no_prune = false;
  auto* sub = app.add_subcommand("subtree", "Is the first tree a sub-arborescence of the second");
  sub->add_option("fileA", sub_a, "query tree or code")->required();
  sub->add_option("fileB", sub_b, "host tree or code")->required();
  sub->add_option("--colors", sub_colors, "JSON color table");
  sub->add_option("--cap", sub_cap, "candidate index sets before giving up")->check(CLI::PositiveNumber);
  sub->add_flag("--no-prune", no_prune, "run the stages on complete index sets only");

  std::string und_a, und_b, und_colors;
  std::size_t und_cap = 1'000'000;
  auto* und = app.add_subcommand("subtree-undirected", "Undirected colored subtree test by leaf rootings");
  und->add_option("fileA", und_a, "first tree")->required();
  und->add_option("fileB", und_b, "second tree")->required();
  und->add_option("--colors", und_colors, "JSON color table");
  und->add_option("--cap", und_cap, "candidate index sets per rooting")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (*canon) return cmd_canon(canon_opts, in, out);
    if (*enc) return cmd_encode(encode_opts, in, out);
    if (*dec) return cmd_decode(decode_input, strict, in, out);
    if (*iso) return cmd_iso_classes(iso_opts, in, out);
    if (*poset) return cmd_poset(poset_opts, poset_flags, in, out, err);
    if (*most) return cmd_most_common(most_opts, most_flags, max_order, in, out, err);
    if (*gen) return cmd_gen(gen_params, out);
    if (*bench) return cmd_bench(bench_params, bench_flags, out);
    if (*sub) return cmd_subtree(sub_a, sub_b, sub_colors, sub_cap, no_prune, out, err);
    if (*und) return cmd_subtree_undirected(und_a, und_b, und_colors, und_cap, out, err);
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return kExitInputError;
  } catch (const ValidationError& e) {
    err << e.what() << '\n';
    return kExitInputError;
  } catch (const CodecError& e) {
    err << e.what() << '\n';
    return kExitInputError;
  } catch (const CanonicalError& e) {
    err << e.what() << '\n';
    return kExitInputError;
  } catch (const TreeError& e) {
    err << e.what() << '\n';
    return kExitInputError;
  } catch (const InputFailure& e) {
    err << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace vcpc::cli
