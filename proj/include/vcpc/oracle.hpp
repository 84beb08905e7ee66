#pragma once

// Brute-force references and random corpora for tests and benchmarks.
// Nothing in the production library depends on this.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vcpc/canonical.hpp"
#include "vcpc/tree.hpp"

namespace vcpc::oracle {

/// Recursive multiset form: key(v) = (color(v), sorted keys of the children).
std::string brute_canonical(const ColoredArborescence& tree);

/// Canonical order computed directly from the recursive definition: children
/// sorted by (color, LD_A of their subtree), then a depth-first traversal.
CanonicalOrder reference_order(const ColoredArborescence& tree);

/// LD_A of T[v] straight from the definition, by recursion.
LdArray reference_ld_array(const ColoredArborescence& tree, VertexId v);

class SearchBudgetExceeded : public std::runtime_error {
 public:
  explicit SearchBudgetExceeded(std::size_t budget);
};

struct EmbeddingSearch {
  bool ordered = false;
  std::size_t budget = 10'000'000;  // node expansions
  std::size_t limit = 0;            // stop after this many maps; 0 means all
};

/// Injective maps psi (indexed by query vertex) preserving colors and sending
/// every query edge to a parent-child edge of the host. In ordered mode the
/// map must also be monotone between the canonical orders of the query and
/// of the host.
std::vector<std::vector<VertexId>> enumerate_embeddings(const ColoredArborescence& query,
                                                        const ColoredArborescence& host,
                                                        const EmbeddingSearch& search = {});

bool has_embedding(const ColoredArborescence& query, const ColoredArborescence& host, bool ordered,
                   std::size_t budget = 10'000'000);

/// Checks that `map` is an embedding in the sense above.
bool is_embedding(const ColoredArborescence& query, const ColoredArborescence& host, const std::vector<VertexId>& map);

/// Undirected colored subtree test: fixes vertex 0 of t1 and tries every vertex
/// of t2 as the image, comparing the two trees rooted there (unordered).
bool has_undirected_embedding(const ColoredArborescence& t1, const ColoredArborescence& t2,
                              std::size_t budget = 10'000'000);

/// Leaf-rooting reference for the code-level undirected test: t1 rooted at its
/// least undirected leaf embeds (ordered) into t2 rooted at some undirected leaf.
bool has_leaf_rooted_embedding(const ColoredArborescence& t1, const ColoredArborescence& t2,
                               std::size_t budget = 10'000'000);

inline constexpr std::string_view kGeneratorId = "mt19937_64/splitmix64/rejection-v1";

struct GenParams {
  std::size_t m = 8;  // largest order
  std::size_t n = 1;  // number of trees
  std::size_t c = 1;  // number of colors
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument unless m, n, c are all at least 1.
void validate(const GenParams& params);

std::uint64_t splitmix64(std::uint64_t x);

/// Sub-seed of tree `index`, so every tree can be generated on its own.
std::uint64_t tree_seed(std::uint64_t seed, std::uint64_t index);

/// Tree `index` of the corpus: order uniform in [1, m], a uniform Prüfer
/// sequence inverted to a labeled tree, colors uniform in [0, c), oriented by
/// breadth-first search from vertex 0.
ColoredArborescence random_tree(const GenParams& params, std::uint64_t index);

std::vector<ColoredArborescence> random_corpus(const GenParams& params);

}  // namespace vcpc::oracle
