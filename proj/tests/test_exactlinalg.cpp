#include "bellcpt/errors.hpp"
#include "bellcpt/exactlinalg.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace bellcpt;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int range, int rank_hint) {
  // product of random r x k and k x c factors has rank <= k
  std::uniform_int_distribution<int> u(-range, range);
  IntMatrix a(r, static_cast<std::size_t>(rank_hint)), b(static_cast<std::size_t>(rank_hint), c);
  for (std::size_t i = 0; i < r; ++i)
    for (int j = 0; j < rank_hint; ++j) a(i, static_cast<std::size_t>(j)) = u(rng);
  for (int i = 0; i < rank_hint; ++i)
    for (std::size_t j = 0; j < c; ++j) b(static_cast<std::size_t>(i), j) = u(rng);
  return a * b;
}

std::vector<IntVector> rows_of(const IntMatrix& m) {
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.row_vector(i));
  return out;
}

}  // namespace

TEST_CASE("rank of small matrices") {
  CHECK(rank(IntMatrix{{1, 2}, {2, 4}}) == 1);
  CHECK(rank(IntMatrix{{1, 0}, {0, 1}}) == 2);
  CHECK(rank(IntMatrix(3, 4)) == 0);
  CHECK(rank(IntMatrix{}) == 0);
}

TEST_CASE("rank agrees with the oracle on random low-rank matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
    const int k = 1 + static_cast<int>(rng() % 6);
    const auto m = random_matrix(rng, r, c, 5, k);
    CHECK(rank(m) == oracle::rank(rows_of(m)));
  }
}

TEST_CASE("int64 rank path matches the exact path, including overflow") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = 2 + rng() % 5, c = 2 + rng() % 5;
    const auto m = random_matrix(rng, r, c, trial < 50 ? 4 : 3'000'000, 1 + static_cast<int>(rng() % 4));
    std::vector<std::int64_t> flat;
    bool fits = true;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        if (!m(i, j).fits_slong_p()) fits = false;
        flat.push_back(fits ? m(i, j).get_si() : 0);
      }
    if (!fits) continue;
    CHECK(rank_int64(flat, r, c) == rank(m));
  }
}

TEST_CASE("integer kernel basis") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = 1 + rng() % 6, c = 2 + rng() % 7;
    const auto g = random_matrix(rng, r, c, 4, 1 + static_cast<int>(rng() % 5));
    const auto t = integer_kernel_basis(g);
    REQUIRE(t.rows() == c);
    CHECK(t.cols() == c - rank(g));
    const auto prod = g * t;
    for (std::size_t i = 0; i < prod.rows(); ++i)
      for (std::size_t j = 0; j < prod.cols(); ++j) CHECK(prod(i, j) == 0);
    if (t.cols() > 0) {
      CHECK(rank(t) == t.cols());
      for (std::size_t j = 0; j < t.cols(); ++j) {
        BigInt gg = 0;
        for (std::size_t i = 0; i < t.rows(); ++i) mpz_gcd(gg.get_mpz_t(), gg.get_mpz_t(), t(i, j).get_mpz_t());
        CHECK(gg == 1);
      }
    }
  }
}

TEST_CASE("kernel of the empty and the full-rank case") {
  CHECK(integer_kernel_basis(IntMatrix(0, 3)).cols() == 3);
  CHECK(integer_kernel_basis(IntMatrix::identity(4)).cols() == 0);
  CHECK(integer_kernel_basis(IntMatrix::identity(4)).rows() == 4);
}

TEST_CASE("primitive_normalize") {
  CHECK(primitive_normalize(to_int_vector({0, -4, 6})) == to_int_vector({0, 2, -3}));
  CHECK(primitive_normalize(to_int_vector({0, -4, 6}), SignConvention::Keep) == to_int_vector({0, -2, 3}));
  CHECK_THROWS_AS(primitive_normalize(to_int_vector({0, 0})), DegenerateInputError);
}

TEST_CASE("narrow") {
  IntVector v = to_int_vector({1, -2});
  CHECK(narrow(v).has_value());
  v.push_back(BigInt("123456789012345678901234567890"));
  CHECK_FALSE(narrow(v).has_value());
}
