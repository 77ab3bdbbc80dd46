#include "bellcpt/exactlinalg.hpp"

#include "bellcpt/detail/arith.hpp"
#include "bellcpt/errors.hpp"

#include <algorithm>
#include <sstream>

namespace bellcpt {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvariantError("IntMatrix: ragged initializer");
    for (long x : r) data_.emplace_back(x);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

IntVector IntMatrix::row_vector(std::size_t r) const {
  auto s = row(r);
  return IntVector(s.begin(), s.end());
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void IntMatrix::append_row(std::span<const BigInt> row) {
  if (row.size() != cols_) throw InvariantError("IntMatrix::append_row: width mismatch");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InvariantError("matrix product: shape mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const BigInt& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

IntVector operator*(const IntMatrix& a, std::span<const BigInt> x) {
  if (a.cols() != x.size()) throw InvariantError("matrix-vector product: shape mismatch");
  IntVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
  return out;
}

IntVector left_multiply(std::span<const BigInt> x, const IntMatrix& m) {
  if (m.rows() != x.size()) throw InvariantError("vector-matrix product: shape mismatch");
  IntVector out(m.cols());
  for (std::size_t k = 0; k < m.rows(); ++k) {
    if (x[k] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += x[k] * m(k, j);
  }
  return out;
}

BigInt dot(std::span<const BigInt> a, std::span<const BigInt> b) {
  if (a.size() != b.size()) throw InvariantError("dot: length mismatch");
  return detail::dot(a, b);
}

IntVector to_int_vector(std::span<const long> v) {
  IntVector out;
  out.reserve(v.size());
  for (long x : v) out.emplace_back(x);
  return out;
}

IntVector to_int_vector(std::initializer_list<long> v) {
  return to_int_vector(std::span<const long>(v.begin(), v.size()));
}

std::string to_string(std::span<const BigInt> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].get_str();
  os << ')';
  return os.str();
}

std::size_t rank(const IntMatrix& m) {
  if (m.empty()) return 0;
  std::vector<BigInt> a;
  a.reserve(m.rows() * m.cols());
  bool fits = true;
  std::vector<std::int64_t> small;
  small.reserve(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& x : m.row(r)) {
      if (fits && x.fits_slong_p()) small.push_back(x.get_si());
      else fits = false;
      a.push_back(x);
    }
  if (fits) return rank_int64(small, m.rows(), m.cols());
  return detail::echelon_rank(a, m.rows(), m.cols());
}

std::size_t rank_int64(std::span<const std::int64_t> data, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) return 0;
  std::vector<std::int64_t> a(data.begin(), data.end());
  try {
    return detail::echelon_rank(a, rows, cols);
  } catch (const detail::Overflow&) {
    std::vector<BigInt> big(data.begin(), data.end());
    return detail::echelon_rank(big, rows, cols);
  }
}

IntMatrix integer_kernel_basis(const IntMatrix& g) {
  const std::size_t n = g.cols();
  const std::size_t m = g.rows();
  std::vector<BigInt> a;
  a.reserve(m * n);
  for (std::size_t r = 0; r < m; ++r)
    for (const auto& x : g.row(r)) a.push_back(x);

  // Echelon form, then clear entries above each pivot to reach a scaled RREF.
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t piv = m;
    for (std::size_t i = r; i < m; ++i) {
      if (a[i * n + c] == 0) continue;
      if (piv == m || abs(a[i * n + c]) < abs(a[piv * n + c])) piv = i;
    }
    if (piv == m) continue;
    if (piv != r)
      for (std::size_t k = 0; k < n; ++k) std::swap(a[piv * n + k], a[r * n + k]);
    const BigInt p = a[r * n + c];
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      const BigInt v = a[i * n + c];
      if (v == 0) continue;
      const BigInt gg = detail::gcd(p, v);
      const BigInt fp = detail::exact_div(p, gg);
      const BigInt fv = detail::exact_div(v, gg);
      for (std::size_t k = 0; k < n; ++k) a[i * n + k] = a[i * n + k] * fp - a[r * n + k] * fv;
      detail::reduce_content(std::span<BigInt>(a.data() + i * n, n));
    }
    pivot_cols.push_back(c);
    ++r;
  }

  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_cols) is_pivot[c] = true;

  IntMatrix t(n, n - pivot_cols.size());
  std::size_t col = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    // Row i reads p_i x_{pc_i} + a_{i,f} x_f = 0; choose x_f = L clearing all denominators.
    BigInt l = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      const BigInt& p = a[i * n + pivot_cols[i]];
      const BigInt& v = a[i * n + f];
      if (v == 0) continue;
      BigInt den = abs(detail::exact_div(p, detail::gcd(p, v)));
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
    }
    IntVector x(n);
    x[f] = l;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      const BigInt& p = a[i * n + pivot_cols[i]];
      const BigInt& v = a[i * n + f];
      if (v == 0) continue;
      x[pivot_cols[i]] = detail::exact_div(-v * l, p);
    }
    x = primitive_normalize(std::move(x));
    for (std::size_t k = 0; k < n; ++k) t(k, col) = x[k];
    ++col;
  }
  return t;
}

bool is_zero(std::span<const BigInt> v) {
  return std::all_of(v.begin(), v.end(), [](const BigInt& x) { return x == 0; });
}

IntVector primitive_normalize(IntVector v, SignConvention sign) {
  if (!detail::reduce_content(std::span<BigInt>(v)))
    throw DegenerateInputError("primitive_normalize: zero vector");
  if (sign == SignConvention::FirstNonzeroPositive) {
    auto it = std::find_if(v.begin(), v.end(), [](const BigInt& x) { return x != 0; });
    if (*it < 0)
      for (auto& x : v) x = -x;
  }
  return v;
}

std::optional<std::vector<std::int64_t>> narrow(std::span<const BigInt> v) {
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.fits_slong_p()) return std::nullopt;
    out.push_back(x.get_si());
  }
  return out;
}

}  // namespace bellcpt
