#include <gtest/gtest.h>

#include <random>

#include "figures.hpp"
#include "support.hpp"
#include "vcpc/canonical.hpp"
#include "vcpc/oracle.hpp"

using namespace vcpc;

namespace {

LdArray arr(std::vector<std::vector<Color>> rows) { return LdArray{std::move(rows)}; }

VertexId by_label(const ColoredArborescence& t, std::uint64_t label) {
  for (VertexId v = 0; v < t.size(); ++v) {
    if (t.original_id(v) == label) return v;
  }
  throw std::out_of_range("label");
}

// rank -> color and rank -> parent rank, the structure an order induces.
std::pair<std::vector<Color>, std::vector<std::int64_t>> ranked(const ColoredArborescence& t, const CanonicalOrder& o) {
  std::vector<Color> colors(t.size());
  std::vector<std::int64_t> parents(t.size(), -1);
  for (VertexId v = 0; v < t.size(); ++v) {
    colors[o.rank(v)] = t.color(v);
    if (auto p = t.parent(v)) parents[o.rank(v)] = o.rank(*p);
  }
  return {colors, parents};
}

}  // namespace

TEST(LdArrayOrder, ShorterPrefixIsSmaller) {
  EXPECT_LT(arr({{}}), arr({{0}}));
  EXPECT_LT(arr({{0, 0, 2}, {}, {}, {}}), arr({{0, 1}, {}, {}}));
  EXPECT_LT(arr({{1}}), arr({{1}, {}}));
  EXPECT_EQ(arr({{1, 2}, {}}), arr({{1, 2}, {}}));
}

TEST(MinVertex, PrefersSmallerColor) {
  std::vector<Color> colors{2, 1};
  LdCache cache{arr({{}}), arr({{}})};
  std::vector<VertexId> cands{0, 1};
  EXPECT_EQ(min_vertex(cands, colors, cache), 1U);
}

TEST(MinVertex, SingleCandidate) {
  std::vector<Color> colors{4};
  LdCache cache{arr({{}})};
  std::vector<VertexId> cands{0};
  EXPECT_EQ(min_vertex(cands, colors, cache), 0U);
}

TEST(MinVertex, EqualColorsCompareArrays) {
  std::vector<Color> colors{1, 1};
  LdCache cache{arr({{0, 1}, {}, {}}), arr({{0, 0, 2}, {}, {}, {}})};
  std::vector<VertexId> cands{0, 1};
  EXPECT_EQ(min_vertex(cands, colors, cache), 1U);
}

TEST(MinVertex, FullTieGoesToEarliest) {
  std::vector<Color> colors{3, 3, 3};
  LdCache cache{arr({{}}), arr({{}}), arr({{}})};
  std::vector<VertexId> cands{2, 0, 1};
  EXPECT_EQ(min_vertex(cands, colors, cache), 2U);
}

TEST(MinVertex, EmptyListThrows) {
  std::vector<Color> colors;
  LdCache cache;
  try {
    min_vertex({}, colors, cache);
    FAIL();
  } catch (const CanonicalError& e) {
    EXPECT_EQ(e.kind(), CanonicalErrorKind::EmptyCandidateList);
  }
}

TEST(SortSiblings, OrdersByColor) {
  std::vector<Color> colors{3, 1};
  LdCache cache{arr({{}}), arr({{}})};
  std::vector<VertexId> cands{0, 1};
  EXPECT_EQ(sort_siblings(cands, colors, cache), (std::vector<VertexId>{1, 0}));
}

TEST(SortSiblings, SortedInputIsUnchanged) {
  std::vector<Color> colors{0, 1, 1, 2};
  LdCache cache{arr({{}}), arr({{}}), arr({{0}, {}}), arr({{}})};
  std::vector<VertexId> cands{0, 1, 2, 3};
  EXPECT_EQ(sort_siblings(cands, colors, cache), cands);
}

TEST(SortSiblings, StableOnTies) {
  std::vector<Color> colors{2, 1, 1};
  LdCache cache{arr({{}}), arr({{}}), arr({{}})};
  std::vector<VertexId> cands{0, 1, 2};
  EXPECT_EQ(sort_siblings(cands, colors, cache), (std::vector<VertexId>{1, 2, 0}));
  EXPECT_TRUE(sort_siblings({}, colors, cache).empty());
}

TEST(LdArray, FigureTree) {
  const auto t = figures::ld::tree_t();
  const auto result = ld_array(t);
  EXPECT_EQ(result.root, arr(figures::ld::root_array()));
  for (const auto& [label, rows] : figures::ld::vertex_arrays()) {
    EXPECT_EQ(result.per_vertex[by_label(t, label)], arr(rows)) << "vertex " << label;
  }
}

TEST(LdArray, SingleVertex) { EXPECT_EQ(ld_array(ColoredArborescence::single_vertex(3)).root, arr({{}})); }

TEST(LdArray, RootWithOneChild) {
  ColoredArborescence t(0, {{1}, {}}, {0, 5});
  EXPECT_EQ(ld_array(t).root, arr({{5}, {}}));
}

TEST(LdArray, LeafArraysAreEmptyRows) {
  for (const auto& t : support::corpus(10, 50, 3, 2)) {
    const auto result = ld_array(t);
    for (VertexId v : leaves(t)) EXPECT_EQ(result.per_vertex[v], arr({{}}));
    for (VertexId v = 0; v < t.size(); ++v) {
      EXPECT_EQ(result.per_vertex[v].rows.size(), (SubtreeHandle{&t, v}.vertices().size()));
    }
  }
}

TEST(FullLdArray, FigureTree) {
  std::vector<std::vector<Color>> expected{{0}};
  for (auto& row : figures::ld::root_array()) expected.push_back(row);
  EXPECT_EQ(full_ld_array(figures::ld::tree_t()).rows, expected);
}

TEST(FullLdArray, SingleVertex) {
  EXPECT_EQ(full_ld_array(ColoredArborescence::single_vertex(3)).rows, (std::vector<std::vector<Color>>{{3}, {}}));
}

TEST(FullLdArray, IsRootColorThenLdArray) {
  for (const auto& t : support::corpus(12, 300, 5, 4)) {
    const auto full = full_ld_array(t);
    const auto ld = ld_array(t).root;
    ASSERT_EQ(full.rows.size(), ld.rows.size() + 1);
    EXPECT_EQ(full.rows.front(), ColorList{t.color(t.root())});
    EXPECT_TRUE(std::equal(ld.rows.begin(), ld.rows.end(), full.rows.begin() + 1));
  }
}

TEST(CanonicalOrder, FirstOrderingFigure) {
  const auto [t, ranks] = figures::order::first();
  const auto order = canonical_order(t);
  for (const auto& [label, rank] : ranks) EXPECT_EQ(order.rank(by_label(t, label)), rank) << "vertex " << label;
}

TEST(CanonicalOrder, SecondOrderingFigure) {
  const auto [t, ranks] = figures::order::second();
  const auto order = canonical_order(t);
  for (const auto& [label, rank] : ranks) EXPECT_EQ(order.rank(by_label(t, label)), rank) << "vertex " << label;
}

TEST(CanonicalOrder, Path) {
  ColoredArborescence t(0, {{1}, {2}, {}}, {0, 0, 0});
  const auto order = canonical_order(t);
  EXPECT_EQ(order.rank(0), 0U);
  EXPECT_EQ(order.rank(1), 1U);
  EXPECT_EQ(order.rank(2), 2U);
}

TEST(CanonicalOrder, RejectsNonPermutation) {
  EXPECT_THROW(CanonicalOrder({0, 0}), std::invalid_argument);
  EXPECT_THROW(CanonicalOrder({0, 2}), std::invalid_argument);
}

TEST(CanonicalOrder, MatchesReferenceOrdering) {
  for (const auto& t : support::corpus(12, 500, 4, 8)) {
    EXPECT_EQ(canonical_order(t), oracle::reference_order(t));
  }
}

TEST(CanonicalOrder, DepthFirstIntervals) {
  for (const auto& t : support::corpus(14, 200, 3, 12)) {
    const auto order = canonical_order(t);
    EXPECT_EQ(order.rank(t.root()), 0U);
    for (VertexId v = 0; v < t.size(); ++v) {
      auto sub = SubtreeHandle{&t, v}.vertices();
      std::uint32_t lo = order.rank(v), hi = order.rank(v);
      for (VertexId w : sub) {
        lo = std::min(lo, order.rank(w));
        hi = std::max(hi, order.rank(w));
      }
      EXPECT_EQ(lo, order.rank(v));
      EXPECT_EQ(hi - lo + 1, sub.size());
    }
  }
}

TEST(CanonicalOrder, SiblingsAreSorted) {
  for (const auto& t : support::corpus(14, 200, 3, 13)) {
    const auto order = canonical_order(t);
    const auto cache = ld_array(t).per_vertex;
    for (VertexId v = 0; v < t.size(); ++v) {
      std::vector<VertexId> kids(t.children(v).begin(), t.children(v).end());
      std::sort(kids.begin(), kids.end(), [&](VertexId a, VertexId b) { return order.rank(a) < order.rank(b); });
      for (std::size_t i = 1; i < kids.size(); ++i) {
        auto a = std::make_pair(t.color(kids[i - 1]), cache[kids[i - 1]]);
        auto b = std::make_pair(t.color(kids[i]), cache[kids[i]]);
        EXPECT_LE(a, b);
      }
    }
  }
}

TEST(CanonicalOrder, StableUnderRelabeling) {
  std::mt19937_64 rng(99);
  for (const auto& t : support::corpus(12, 300, 3, 14)) {
    const auto s = support::scramble(t, rng);
    EXPECT_EQ(ranked(t, canonical_order(t)), ranked(s, canonical_order(s)));
  }
}

TEST(Reconstruct, SingleVertex) {
  auto t = reconstruct(FullLdArray{{{3}, {}}});
  EXPECT_EQ(t.size(), 1U);
  EXPECT_EQ(t.color(0), 3U);
}

TEST(Reconstruct, FigureTree) {
  const auto t = figures::ld::tree_t();
  const auto back = reconstruct(full_ld_array(t));
  EXPECT_EQ(oracle::brute_canonical(back), oracle::brute_canonical(t));
  EXPECT_EQ(back, canonical_relabel(t));
}

TEST(Reconstruct, MalformedDescriptors) {
  auto kind = [](FullLdArray f) {
    try {
      reconstruct(f);
    } catch (const CanonicalError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "accepted";
    return CanonicalErrorKind::EmptyCandidateList;
  };
  EXPECT_EQ(kind({}), CanonicalErrorKind::MalformedDescriptor);
  EXPECT_EQ(kind({{{1, 2}, {}}}), CanonicalErrorKind::MalformedDescriptor);
  EXPECT_EQ(kind({{{1}, {2}}}), CanonicalErrorKind::MalformedDescriptor);
  EXPECT_EQ(kind({{{1}, {}, {}}}), CanonicalErrorKind::MalformedDescriptor);
  EXPECT_EQ(kind({{{1}, {}, {2}}}), CanonicalErrorKind::MalformedDescriptor);
  EXPECT_EQ(kind({{{1}, {2, 2}, {}, {3}}}), CanonicalErrorKind::MalformedDescriptor);
}

TEST(Reconstruct, IsInverseOfFullLdArray) {
  for (const auto& t : support::corpus(12, 1000, 7, 15)) {
    const auto back = reconstruct(full_ld_array(t));
    EXPECT_EQ(back, canonical_relabel(t));
    EXPECT_EQ(oracle::brute_canonical(back), oracle::brute_canonical(t));
  }
}

TEST(FullLdArray, EqualityIsIsomorphism) {
  const auto trees = support::corpus(6, 200, 2, 16);
  std::vector<FullLdArray> full;
  std::vector<std::string> keys;
  for (const auto& t : trees) {
    full.push_back(full_ld_array(t));
    keys.push_back(oracle::brute_canonical(t));
  }
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (std::size_t j = 0; j < trees.size(); ++j) EXPECT_EQ(full[i] == full[j], keys[i] == keys[j]);
  }
}

TEST(CanonicalChildren, AgreesWithMaterializedArrays) {
  for (const auto& t : support::corpus(12, 300, 3, 17)) {
    const auto sorted = canonical_children(t);
    const auto cache = ld_array(t).per_vertex;
    for (VertexId v = 0; v < t.size(); ++v) {
      EXPECT_EQ(sorted[v], sort_siblings(t.children(v), t.colors(), cache));
    }
  }
}
