#pragma once

#include "bellcpt/inequality.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace bellcpt {

struct Letter {
  int party = 0;
  int setting = 1;  ///< 1-based

  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// Product of dichotomic observables. Canonical words are sorted by party (stable, so
/// the order inside a party is kept) and carry no adjacent repeats.
struct Monomial {
  std::vector<Letter> letters;

  std::size_t length() const noexcept { return letters.size(); }
  bool is_identity() const noexcept { return letters.empty(); }
  /// "1" for the identity, otherwise e.g. "A1A2B1".
  std::string label() const;

  /// Shorter words first, then lexicographic.
  friend std::strong_ordering operator<=>(const Monomial& x, const Monomial& y);
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Throws InvariantError for letters outside the scenario.
Monomial canonical_monomial(const Scenario& s, std::vector<Letter> word);
/// Reversed word, canonicalized.
Monomial adjoint(const Scenario& s, const Monomial& m);

/// Moment matrix structure of one NPA level. Entry (u, v) carries canonical(u^dagger v);
/// a word and its adjoint share one class (real symmetric moment matrix).
struct MomentProblem {
  Scenario scenario;
  int level = 1;
  std::vector<Monomial> monomials;
  /// classes[0] is the identity, fixed to 1. The others are the free variables 1..K.
  std::vector<Monomial> classes;
  /// entry_class[u][v], symmetric.
  std::vector<std::vector<std::size_t>> entry_class;

  std::size_t size() const noexcept { return monomials.size(); }
  /// Class index of a monomial that occurs in the matrix; throws otherwise.
  std::size_t class_of(const Monomial& m) const;
};

/// Level 1..3; full products up to the level.
MomentProblem moment_matrix_structure(const Scenario& s, int level);

/// Correlator monomial of a coefficient index (letters in party order).
Monomial correlator_monomial(const Scenario& s, std::size_t index);

/// Bell-expression weight per class (index 0 collects nothing), length = classes.size().
std::vector<BigInt> objective_weights(const MomentProblem& problem, const Inequality& ineq);

/// Parsed sparse SDPA problem: minimize c.x subject to sum_k F_k x_k - F_0 >= 0.
struct SdpaProblem {
  struct Entry {
    std::size_t matrix = 0;
    std::size_t block = 1;
    std::size_t row = 1;
    std::size_t col = 1;
    double value = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<std::string> comments;  ///< without the leading '*' or '"'
  std::vector<long> blocks;            ///< negative entries denote diagonal blocks
  std::vector<double> objective;
  std::vector<Entry> entries;

  std::size_t variables() const noexcept { return objective.size(); }
  friend bool operator==(const SdpaProblem&, const SdpaProblem&) = default;
};

/// FNV-1a over the inequality's text block.
std::uint64_t inequality_hash(const Inequality& ineq);

/// One block of the moment-matrix size. Variable k is class k; F_0 = -E_identity,
/// F_k = E_k (upper triangle), c_k = b_s summed over the indices mapping to class k,
/// so the maximal Bell value is minus the SDPA optimum.
SdpaProblem npa_problem(const Inequality& ineq, int level);
std::string export_sdpa(const Inequality& ineq, int level);
/// "k label" per variable.
std::string export_sdpa_index(const Inequality& ineq, int level);

std::string write_sdpa(const SdpaProblem& p);
/// Throws ParseError with line numbers.
SdpaProblem parse_sdpa(const std::string& text);

}  // namespace bellcpt
