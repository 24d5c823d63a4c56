#pragma once

// Brute-force reference computations for the tests. Everything here is
// written directly from definitions and shares no code with the library
// beyond the Category accessors (objects, hom-sets, composition).

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "catdim/category.hpp"

namespace oracle {

using catdim::ArrowId;
using catdim::Category;
using catdim::ObjectId;

inline std::vector<ArrowId> hom(const Category& c, ObjectId x, ObjectId y) {
  auto h = c.hom(x, y);
  return {h.begin(), h.end()};
}

inline std::size_t position(const std::vector<ArrowId>& list, ArrowId f) {
  return static_cast<std::size_t>(std::find(list.begin(), list.end(), f) - list.begin());
}

/// S(x, y) by enumerating every pair x -> y -> x.
inline std::vector<ArrowId> factor_set(const Category& c, ObjectId x, ObjectId y) {
  std::set<ArrowId> out;
  for (ArrowId p : hom(c, x, y))
    for (ArrowId q : hom(c, y, x)) out.insert(c.compose(p, q));
  return {out.begin(), out.end()};
}

/// Rank over Q of a rational matrix by plain Gaussian elimination.
inline std::size_t rank_q(std::vector<std::vector<mpq_class>> m) {
  std::size_t rank = 0;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      mpq_class f = m[r][col] / m[rank][col];
      for (std::size_t k = col; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Rank over F_p.
inline std::size_t rank_mod(std::vector<std::vector<std::int64_t>> m, std::int64_t p) {
  auto inv = [p](std::int64_t a) {
    std::int64_t r = 1, e = p - 2;
    a %= p;
    while (e) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return r;
  };
  std::size_t rank = 0;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (auto& row : m)
    for (auto& v : row) v = ((v % p) + p) % p;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    std::int64_t iv = inv(m[rank][col]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      std::int64_t f = m[r][col] * iv % p;
      for (std::size_t k = col; k < cols; ++k) m[r][k] = ((m[r][k] - f * m[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// The linear system sum_s c_s M_s = 1 as an augmented matrix: one row per
/// matrix entry (all n^2 of them), one column per s plus the right side.
inline std::vector<std::vector<std::int64_t>> preorder_system(const Category& c, ObjectId d, ObjectId x,
                                                              const std::vector<ArrowId>& s_list) {
  auto h = hom(c, d, x);
  const std::size_t n = h.size();
  std::vector<std::vector<std::int64_t>> m(n * n, std::vector<std::int64_t>(s_list.size() + 1, 0));
  for (std::size_t k = 0; k < s_list.size(); ++k)
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t row = position(h, c.compose(h[col], s_list[k]));
      m[row * n + col][k] = 1;
    }
  for (std::size_t i = 0; i < n; ++i) m[i * n + i][s_list.size()] = 1;
  return m;
}

/// x <=_d y over Q: the identity lies in the span of the M_s iff appending
/// it does not raise the rank.
inline bool leq_q(const Category& c, ObjectId d, ObjectId x, ObjectId y) {
  auto s = oracle::factor_set(c, x, y);
  if (hom(c, d, x).empty()) return true;
  auto aug = preorder_system(c, d, x, s);
  std::vector<std::vector<mpq_class>> full, coeff;
  for (const auto& row : aug) {
    std::vector<mpq_class> r(row.begin(), row.end());
    full.push_back(r);
    r.pop_back();
    coeff.push_back(std::move(r));
  }
  return rank_q(coeff) == rank_q(full);
}

inline bool leq_mod(const Category& c, ObjectId d, ObjectId x, ObjectId y, std::int64_t p) {
  auto s = oracle::factor_set(c, x, y);
  if (hom(c, d, x).empty()) return true;
  auto aug = preorder_system(c, d, x, s);
  auto coeff = aug;
  for (auto& r : coeff) r.pop_back();
  return rank_mod(coeff, p) == rank_mod(aug, p);
}

/// Does sum_s coeffs(s) M_s equal the identity on Hom(d, x), with every s
/// an endomorphism of x factoring through y? p = 0 means exact equality,
/// otherwise equality mod p.
inline bool certificate_holds(const Category& c, ObjectId d, ObjectId x, ObjectId y,
                              const std::vector<std::pair<ArrowId, mpq_class>>& coeffs, std::int64_t p = 0) {
  std::vector<ArrowId> s_list;
  for (const auto& [s, v] : coeffs) s_list.push_back(s);
  auto s_set = oracle::factor_set(c, x, y);
  for (ArrowId s : s_list)
    if (!std::binary_search(s_set.begin(), s_set.end(), s)) return false;
  for (const auto& row : preorder_system(c, d, x, s_list)) {
    mpq_class total = 0;
    for (std::size_t k = 0; k < s_list.size(); ++k) total += row[k] * coeffs[k].second;
    mpq_class diff = total - row.back();
    if (p == 0 ? diff != 0 : (diff.get_den() != 1 || diff.get_num() % p != 0)) return false;
  }
  return true;
}

/// Determinant by the Leibniz expansion (tiny matrices only).
inline mpq_class det(const std::vector<std::vector<mpq_class>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  mpq_class total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    mpq_class term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= m[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
