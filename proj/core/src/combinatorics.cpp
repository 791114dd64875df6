#include "grasskit/combinatorics.hpp"

#include <array>
#include <bit>
#include <memory>
#include <mutex>
#include <string>

#include "grasskit/errors.hpp"

namespace grasskit {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::uint64_t rank_combination(int n, std::span<const int> indices) {
  const int p = static_cast<int>(indices.size());
  int previous = -1;
  for (int idx : indices) {
    if (idx <= previous || idx >= n) {
      throw DomainError("rank_combination: indices must be strictly increasing in [0, n)");
    }
    previous = idx;
  }
  // Lexicographic rank = C(n,p) - 1 - sum_i C(n-1-c_i, p-i).
  std::uint64_t tail = 0;
  for (int i = 0; i < p; ++i) {
    tail += binomial(n - 1 - indices[static_cast<std::size_t>(i)], p - i);
  }
  return binomial(n, p) - 1 - tail;
}

std::vector<int> unrank_combination(int n, int p, std::uint64_t rank) {
  if (p < 0 || p > n) throw DomainError("unrank_combination: need 0 <= p <= n");
  if (rank >= binomial(n, p)) throw DomainError("unrank_combination: rank out of range");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(p));
  int next = 0;
  for (int slot = 0; slot < p; ++slot) {
    // Skip over blocks of combinations whose slot-th entry is smaller.
    for (;; ++next) {
      const std::uint64_t block = binomial(n - 1 - next, p - 1 - slot);
      if (rank < block) break;
      rank -= block;
    }
    out.push_back(next++);
  }
  return out;
}

SubsetMask indices_to_mask(std::span<const int> indices) {
  SubsetMask mask = 0;
  for (int idx : indices) {
    if (idx < 0 || idx >= kMaxDimension) throw DomainError("index out of range");
    mask |= SubsetMask{1} << idx;
  }
  return mask;
}

std::vector<int> mask_to_indices(SubsetMask mask) {
  std::vector<int> out;
  while (mask != 0) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

CombinationTable::CombinationTable(int n)
    : n_(n), by_degree_(static_cast<std::size_t>(n + 1)), rank_of_mask_(std::size_t{1} << n, 0) {
  // Enumerate masks in lexicographic order of their index tuples per degree.
  for (int p = 0; p <= n; ++p) {
    auto& list = by_degree_[static_cast<std::size_t>(p)];
    const std::uint64_t count = binomial(n, p);
    list.reserve(count);
    for (std::uint64_t r = 0; r < count; ++r) {
      const auto idx = unrank_combination(n, p, r);
      const SubsetMask mask = indices_to_mask(idx);
      list.push_back(mask);
      rank_of_mask_[mask] = static_cast<std::uint32_t>(r);
    }
  }
}

const CombinationTable& CombinationTable::get(int n) {
  if (n < 0 || n > kMaxDimension) {
    throw DomainError("ambient dimension must lie in [0, " + std::to_string(kMaxDimension) + "]");
  }
  static std::array<std::once_flag, kMaxDimension + 1> flags;
  static std::array<std::unique_ptr<CombinationTable>, kMaxDimension + 1> tables;
  const auto slot = static_cast<std::size_t>(n);
  std::call_once(flags[slot], [&] { tables[slot].reset(new CombinationTable(n)); });
  return *tables[slot];
}

int merge_sign(SubsetMask a, SubsetMask b) {
  // For each element i of a, count the elements of b below i.
  int inversions = 0;
  while (a != 0) {
    const int i = std::countr_zero(a);
    a &= a - 1;
    const SubsetMask below = (SubsetMask{1} << i) - 1;
    inversions += std::popcount(b & below);
  }
  return (inversions & 1) ? -1 : 1;
}

}  // namespace grasskit
