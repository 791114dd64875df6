#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include <grasskit/combinatorics.hpp>
#include <grasskit/errors.hpp>

namespace grasskit {
namespace {

TEST(Binomial, SmallTable) {
  EXPECT_EQ(binomial(6, 3), 20u);
  EXPECT_EQ(binomial(16, 8), 12870u);
  EXPECT_EQ(binomial(4, 0), 1u);
  EXPECT_EQ(binomial(3, 5), 0u);
}

// Brute-force lexicographic enumeration by incrementing index tuples.
TEST(RankCombination, MatchesLexicographicEnumeration) {
  for (int n = 1; n <= 7; ++n) {
    for (int p = 1; p <= n; ++p) {
      std::vector<int> idx(static_cast<std::size_t>(p));
      std::iota(idx.begin(), idx.end(), 0);
      std::uint64_t expected = 0;
      while (true) {
        EXPECT_EQ(rank_combination(n, idx), expected);
        EXPECT_EQ(unrank_combination(n, p, expected), idx);
        ++expected;
        int k = p - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - p + k) --k;
        if (k < 0) break;
        ++idx[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < p; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
      EXPECT_EQ(expected, binomial(n, p));
    }
  }
}

TEST(RankCombination, RejectsNonIncreasing) {
  const int bad[] = {2, 1};
  EXPECT_THROW(rank_combination(4, bad), DomainError);
}

TEST(CombinationTable, RanksAgreeWithRankCombination) {
  const CombinationTable& t = CombinationTable::get(6);
  for (int p = 0; p <= 6; ++p) {
    const auto& subsets = t.subsets(p);
    ASSERT_EQ(subsets.size(), binomial(6, p));
    for (std::size_t r = 0; r < subsets.size(); ++r) {
      EXPECT_EQ(t.rank(subsets[r]), r);
      if (p > 0) EXPECT_EQ(rank_combination(6, mask_to_indices(subsets[r])), r);
    }
  }
}

// Sign by counting inversions of the concatenated sequence.
TEST(MergeSign, CountsInversions) {
  for (SubsetMask a = 0; a < 64; ++a) {
    for (SubsetMask b = 0; b < 64; ++b) {
      if (a & b) continue;
      std::vector<int> seq = mask_to_indices(a);
      const std::vector<int> tail = mask_to_indices(b);
      seq.insert(seq.end(), tail.begin(), tail.end());
      int inversions = 0;
      for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = i + 1; j < seq.size(); ++j) inversions += seq[i] > seq[j];
      }
      EXPECT_EQ(merge_sign(a, b), inversions % 2 ? -1 : 1);
    }
  }
}

}  // namespace
}  // namespace grasskit
