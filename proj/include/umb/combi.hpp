#pragma once

#include <array>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "umb/errors.hpp"

namespace umb {

inline long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/// Sorted index combinations of size k out of {0..n-1}, in lexicographic
/// order, with rank/sign lookup for arbitrary index tuples. Antisymmetric
/// tensors (form components) are stored on these combinations.
class ComboTable {
public:
  ComboTable(int n, int k) : n_(n), k_(k) {
    std::vector<int> c(static_cast<std::size_t>(k));
    build(c, 0, 0);
  }

  int n() const { return n_; }
  int k() const { return k_; }
  int count() const { return static_cast<int>(combos_.size()); }
  const std::vector<int>& combo(int r) const { return combos_[static_cast<std::size_t>(r)]; }
  const std::vector<std::vector<int>>& combos() const { return combos_; }

  /// Lexicographic rank of a strictly increasing tuple.
  int rank(std::span<const int> sorted) const {
    long r = 0;
    int prev = -1;
    for (int pos = 0; pos < k_; ++pos) {
      for (int v = prev + 1; v < sorted[static_cast<std::size_t>(pos)]; ++v)
        r += binom(n_ - 1 - v, k_ - 1 - pos);
      prev = sorted[static_cast<std::size_t>(pos)];
    }
    return static_cast<int>(r);
  }

  /// For an arbitrary tuple: sign of the permutation sorting it (0 when an
  /// index repeats) and the rank of the sorted tuple.
  struct Ranked {
    int sign;
    int rank;
  };
  Ranked rank_signed(std::span<const int> tuple) const {
    std::array<int, 12> buf{};
    for (int i = 0; i < k_; ++i) buf[static_cast<std::size_t>(i)] = tuple[static_cast<std::size_t>(i)];
    int sign = 1;
    for (int i = 1; i < k_; ++i) {
      int v = buf[static_cast<std::size_t>(i)];
      int j = i - 1;
      while (j >= 0 && buf[static_cast<std::size_t>(j)] > v) {
        buf[static_cast<std::size_t>(j + 1)] = buf[static_cast<std::size_t>(j)];
        --j;
        sign = -sign;
      }
      buf[static_cast<std::size_t>(j + 1)] = v;
    }
    for (int i = 1; i < k_; ++i)
      if (buf[static_cast<std::size_t>(i)] == buf[static_cast<std::size_t>(i - 1)]) return {0, 0};
    return {sign, rank(std::span<const int>(buf.data(), static_cast<std::size_t>(k_)))};
  }

private:
  void build(std::vector<int>& c, int pos, int start) {
    if (pos == k_) {
      combos_.push_back(c);
      return;
    }
    for (int v = start; v <= n_ - (k_ - pos); ++v) {
      c[static_cast<std::size_t>(pos)] = v;
      build(c, pos + 1, v + 1);
    }
  }

  int n_;
  int k_;
  std::vector<std::vector<int>> combos_;
};

inline const ComboTable& combo_table(int n, int k) {
  static std::map<std::pair<int, int>, ComboTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, k});
  if (it == cache.end()) it = cache.emplace(std::make_pair(n, k), ComboTable(n, k)).first;
  return it->second;
}

/// Sign of the permutation (tuple_a, tuple_b) of {0..n-1}; tuples assumed
/// individually sorted and jointly a partition. Used by the Hodge star.
inline int split_sign(std::span<const int> a, std::span<const int> b) {
  std::vector<int> perm(a.begin(), a.end());
  perm.insert(perm.end(), b.begin(), b.end());
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

}  // namespace umb
