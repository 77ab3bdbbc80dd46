#pragma once

// Integer kernels shared by the exact algorithms. The same template code runs on
// checked int64 (fast path) and on BigInt; the int64 instantiation throws Overflow
// so callers can restart on BigInt.

#include "bellcpt/exactlinalg.hpp"

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace bellcpt::detail {

struct Overflow {};

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t gcd(std::int64_t a, std::int64_t b) {
  if (a == INT64_MIN || b == INT64_MIN) throw Overflow{};
  return std::gcd(a, b);
}
inline std::int64_t exact_div(std::int64_t a, std::int64_t b) { return a / b; }
inline int sgn(std::int64_t a) { return (a > 0) - (a < 0); }
inline std::int64_t absval(std::int64_t a) {
  if (a == INT64_MIN) throw Overflow{};
  return a < 0 ? -a : a;
}

inline BigInt add(const BigInt& a, const BigInt& b) { return a + b; }
inline BigInt sub(const BigInt& a, const BigInt& b) { return a - b; }
inline BigInt mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}
inline BigInt exact_div(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}
inline int sgn(const BigInt& a) { return ::sgn(a); }
inline BigInt absval(const BigInt& a) { return abs(a); }

/// Dot product; int64 accumulates in __int128 and checks the final value only.
inline std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  __int128 acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<__int128>(a[i]) * b[i];
  if (acc > INT64_MAX || acc < INT64_MIN) throw Overflow{};
  return static_cast<std::int64_t>(acc);
}
inline BigInt dot(std::span<const BigInt> a, std::span<const BigInt> b) {
  BigInt acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// Divides a span by the gcd of its entries (no sign change). Returns false if all zero.
template <class Z>
bool reduce_content(std::span<Z> v) {
  Z g = 0;
  for (const auto& x : v) {
    if (sgn(x) != 0) {
      g = gcd(g, x);
      if (g == 1) return true;
    }
  }
  if (sgn(g) == 0) return false;
  for (auto& x : v) x = exact_div(x, g);
  return true;
}

/// Fraction-free forward elimination of a row-major matrix in place; returns the rank.
/// Stops early once `stop_at` independent rows are found.
template <class Z>
std::size_t echelon_rank(std::vector<Z>& a, std::size_t rows, std::size_t cols,
                         std::size_t stop_at = static_cast<std::size_t>(-1)) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (sgn(a[i * cols + c]) == 0) continue;
      if (piv == rows || absval(a[i * cols + c]) < absval(a[piv * cols + c])) piv = i;
    }
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t k = c; k < cols; ++k) std::swap(a[piv * cols + k], a[r * cols + k]);
    const Z p = a[r * cols + c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Z v = a[i * cols + c];
      if (sgn(v) == 0) continue;
      const Z g = gcd(p, v);
      const Z fp = exact_div(p, g);
      const Z fv = exact_div(v, g);
      for (std::size_t k = c; k < cols; ++k)
        a[i * cols + k] = sub(mul(a[i * cols + k], fp), mul(a[r * cols + k], fv));
      reduce_content(std::span<Z>(a.data() + i * cols + c, cols - c));
    }
    ++r;
    if (r >= stop_at) return r;
  }
  return r;
}

}  // namespace bellcpt::detail
