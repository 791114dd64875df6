#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace grasskit {

// Largest ambient dimension supported by the dense exterior algebra.
inline constexpr int kMaxDimension = 16;

// A p-subset of {0, ..., n-1} encoded as a bitmask (bit i set <=> index i present).
using SubsetMask = std::uint32_t;

std::uint64_t binomial(int n, int k);

/// Lexicographic rank of a strictly increasing 0-based index tuple among all
/// p-subsets of {0..n-1}, via the combinatorial number system.
std::uint64_t rank_combination(int n, std::span<const int> indices);

/// Inverse of rank_combination.
std::vector<int> unrank_combination(int n, int p, std::uint64_t rank);

SubsetMask indices_to_mask(std::span<const int> indices);
std::vector<int> mask_to_indices(SubsetMask mask);

// Precomputed lexicographic enumeration of the p-subsets of {0..n-1}.
// Tables are built once per n and shared; lookups are thread-safe.
class CombinationTable {
 public:
  static const CombinationTable& get(int n);

  int n() const { return n_; }
  // Masks of all p-subsets in lexicographic order of their index tuples.
  const std::vector<SubsetMask>& subsets(int p) const { return by_degree_.at(p); }
  // Rank of `mask` among subsets of the same size.
  std::uint32_t rank(SubsetMask mask) const { return rank_of_mask_[mask]; }

 private:
  explicit CombinationTable(int n);

  int n_;
  std::vector<std::vector<SubsetMask>> by_degree_;
  std::vector<std::uint32_t> rank_of_mask_;
};

// Sign of the permutation that sorts the concatenation (a, b) of two disjoint
// increasing index tuples: (-1)^{#{(i,j) : i in a, j in b, i > j}}.
int merge_sign(SubsetMask a, SubsetMask b);

}  // namespace grasskit
