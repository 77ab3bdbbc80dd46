#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bellcpt {

using BigInt = mpz_class;
using IntVector = std::vector<BigInt>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const BigInt> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  IntVector row_vector(std::size_t r) const;
  IntVector column(std::size_t c) const;

  void append_row(std::span<const BigInt> row);
  IntMatrix transpose() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, std::span<const BigInt> x);
/// Row vector times matrix: x^T M.
IntVector left_multiply(std::span<const BigInt> x, const IntMatrix& m);
BigInt dot(std::span<const BigInt> a, std::span<const BigInt> b);

IntVector to_int_vector(std::span<const long> v);
IntVector to_int_vector(std::initializer_list<long> v);
std::string to_string(std::span<const BigInt> v);

/// Exact rank over the rationals (fraction-free elimination).
std::size_t rank(const IntMatrix& m);

/// Columns span ker(G): (D+1) x K with K = cols(G) - rank(G); every column integral and
/// primitive; G * T = 0 exactly. K = 0 yields a cols(G) x 0 matrix.
IntMatrix integer_kernel_basis(const IntMatrix& g);

enum class SignConvention {
  FirstNonzeroPositive,  ///< canonical representative of a line through the origin
  Keep,                  ///< only divide by the content; keeps the given orientation
};

/// Divides by the gcd of the entries. Throws DegenerateInputError on the zero vector.
IntVector primitive_normalize(IntVector v, SignConvention sign = SignConvention::FirstNonzeroPositive);
bool is_zero(std::span<const BigInt> v);

/// Narrowing to int64 when every entry fits.
std::optional<std::vector<std::int64_t>> narrow(std::span<const BigInt> v);

/// Rank of an int64 row-major matrix. Uses a checked 64-bit path and falls back to
/// arbitrary precision on overflow, so the result is always exact.
std::size_t rank_int64(std::span<const std::int64_t> data, std::size_t rows, std::size_t cols);

}  // namespace bellcpt
