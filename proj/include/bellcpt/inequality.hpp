#pragma once

#include "bellcpt/exactlinalg.hpp"
#include "bellcpt/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bellcpt {

/// Bell inequality  sum_{s != 0} -b_s <X_s> <= b_0  over a dichotomic scenario.
///
/// `coefficients()` holds b in the orientation b . w >= 0 for every lifted vertex w,
/// so b_0 is the classical bound and the cone normal is -b. The vector is primitive.
class Inequality {
public:
  Inequality() = default;
  /// Takes b directly (b . w >= 0 orientation) and divides by the content.
  Inequality(Scenario scenario, IntVector b);

  /// From a cone facet normal n (n . w <= 0), i.e. b = -n.
  static Inequality from_cone_normal(Scenario scenario, const IntVector& normal);
  /// From Bell-expression coefficients c_s (index 0 ignored) and bound: b_0 = bound, b_s = -c_s.
  static Inequality from_expression(Scenario scenario, const IntVector& expression, const BigInt& bound);

  const Scenario& scenario() const noexcept { return scenario_; }
  const IntVector& coefficients() const noexcept { return b_; }
  const BigInt& bound() const { return b_.at(0); }
  /// Coefficient of <X_s> on the left-hand side, i.e. -b_s.
  BigInt expression_coefficient(std::size_t index) const { return -b_.at(index); }
  IntVector cone_normal() const;

  /// Number of nonzero non-constant coefficients.
  std::size_t term_count() const;
  /// Left-hand side on a lifted behaviour vector.
  BigInt evaluate(std::span<const int> lifted) const;
  BigInt evaluate(std::span<const BigInt> lifted) const;

  friend bool operator==(const Inequality&, const Inequality&) = default;
  friend bool operator<(const Inequality& x, const Inequality& y) { return x.b_ < y.b_; }

private:
  Scenario scenario_;
  IntVector b_;
};

/// Largest left-hand-side value over the deterministic vertices.
BigInt classical_maximum(const Inequality& ineq);
/// b_0 equals the vertex maximum and no vertex exceeds it.
bool is_valid_bell_inequality(const Inequality& ineq);
/// Facet of the scenario's local polytope (exact rank certificate).
bool is_facet_inequality(const Inequality& ineq);
/// Positivity facet prod_i (1 + sigma_i X_{i,s_i}) >= 0 over a full tuple of settings.
bool is_trivial(const Inequality& ineq);

/// Text block: scenario header, "bound: <b_0>", then one "s_1,...,s_n: <c_s>" line per
/// nonzero left-hand-side coefficient in index order. Optional comment lines first.
std::string write_inequality(const Inequality& ineq, const std::vector<std::string>& comments = {});
/// Parses one block; '#' lines and blank lines are skipped. `first_line` offsets the
/// reported line numbers.
Inequality read_inequality(const std::string& text, std::size_t first_line = 1);
/// A file may hold several blocks separated by blank lines (and optional "class" lines).
std::vector<Inequality> read_inequalities(const std::string& text);

/// Party-permutation-symmetric rendering "(110) + (210) - 2(331) <= 8" when the
/// inequality is invariant under all party permutations (equal setting counts).
std::optional<std::string> symmetric_notation(const Inequality& ineq);
/// Inverse of symmetric_notation; digits inside "(...)" are a multiset of settings.
Inequality parse_symmetric(const Scenario& scenario, const std::string& text);
/// Plain rendering such as "A1 - A2 + A1B1 + 2 A2B1C2 <= 4".
std::string expression_string(const Inequality& ineq);
/// Inverse of expression_string; also accepts <A1B1> brackets, '*', and "<=" or "≤".
Inequality parse_expression(const Scenario& scenario, const std::string& text);

/// Letter-wise substitution: every letter of the source scenario is either fixed to
/// a constant +-1 or renamed to sign * (target party, target setting).
struct Substitution {
  struct Target {
    bool constant = false;
    int value = 1;  ///< constant value, or sign of the renamed letter
    int party = 0;
    int setting = 0;
  };
  Scenario target;
  std::vector<std::vector<Target>> letters;  ///< [party][setting - 1]

  /// Keeps every letter in place.
  static Substitution identity(const Scenario& source);
};

/// Left-hand side and bound rewritten under the substitution (no normalization; the
/// constant contributions of fixed letters move into the bound). Returns the raw
/// b-vector in the target scenario.
IntVector substitute(const Inequality& ineq, const Substitution& sub);

/// Pads every party with unused settings up to `settings` (a lifting of the inequality).
Inequality lift_settings(const Inequality& ineq, const std::vector<int>& settings);

/// True iff `b` is a strictly positive rational multiple of `reference`.
bool is_positive_multiple(std::span<const BigInt> b, std::span<const BigInt> reference);

}  // namespace bellcpt
