#pragma once

#include "bellcpt/inequality.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace bellcpt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// observables[p][s - 1] is party p's +-1 observable for setting s.
using Observables = std::vector<std::vector<CMatrix>>;

/// Hermitian with every eigenvalue within `tol` of +-1.
bool is_observable(const CMatrix& x, double tol = 1e-9);

/// Common local dimension of a full observable set; throws InvariantError when the
/// set does not match the scenario or the dimensions differ.
int local_dimension(const Scenario& s, const Observables& obs);

/// Bell operator sum_{s != 0} c_s X_s with c_s = -b_s and setting 0 the identity.
CMatrix bell_operator(const Inequality& ineq, const Observables& obs);

/// <psi|op|psi> (real part).
double expectation(const CMatrix& op, const CVector& psi);

struct StateUpdate {
  double value = 0;
  CVector state;
};
/// Top eigenpair of a Hermitian operator.
StateUpdate optimal_state(const CMatrix& bell);

/// sign(H): eigenvalues >= 0 go to +1 and the rest to -1.
CMatrix dichotomic_sign(const CMatrix& h);

/// Effective operators of party p for the fixed state and the other parties'
/// observables: the expression equals const + sum_s tr(X_s H_s). Entry s-1 is H_s.
std::vector<CMatrix> effective_operators(const Inequality& ineq, const Observables& obs, int party,
                                         const CVector& psi);
/// Replaces every observable of `party` by the sign of its effective operator.
void update_party(const Inequality& ineq, Observables& obs, int party, const CVector& psi);

/// Random dichotomic observable U diag(+-1) U^dagger with Haar-like U.
CMatrix random_observable(int dim, std::mt19937_64& rng);
Observables random_observables(const Scenario& s, int dim, std::mt19937_64& rng);
/// Direct sum X (+) 1 up to dimension `dim`.
Observables embed_observables(const Observables& obs, int dim);

struct SeesawConfig {
  int local_dim = 2;
  std::size_t restarts = 50;
  std::size_t warmup = 5;
  std::size_t survivors = 5;
  double tolerance = 1e-9;
  std::size_t max_iterations = 500;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  /// Extra start from these observables (kept through the warmup cut).
  std::optional<Observables> initial;

  /// Throws InvariantError on nonsense values.
  void validate() const;
};

struct RestartTrace {
  std::size_t restart = 0;
  /// Objective after the initial state update and after every sweep.
  std::vector<double> values;
  bool refined = false;
  bool converged = false;
};

struct SeesawResult {
  double value = 0;
  CVector state;
  Observables observables;
  std::size_t best_restart = 0;
  /// Best restart stopped on the tolerance rather than on max_iterations.
  bool converged = false;
  std::vector<RestartTrace> traces;
};

/// One sweep: every party's observables in turn, each followed by a state update.
/// Returns the objective afterwards.
double seesaw_sweep(const Inequality& ineq, Observables& obs, CVector& psi);

SeesawResult seesaw(const Inequality& ineq, const SeesawConfig& cfg = {});

/// sum over non-constant indices of |b_s|.
BigInt algebraic_bound(const Inequality& ineq);

struct BoundsRecord {
  BigInt classical;
  BigInt algebraic;
  std::optional<double> qubit;
  std::optional<double> qutrit;
  std::optional<double> npa2;
  std::optional<double> npa3;
  /// Free text noting where the NPA values came from.
  std::string npa_source;

  static BoundsRecord of(const Inequality& ineq);
};

/// Percentages. m_N uses level 3 when present and flags the level-2 fallback.
struct Metrics {
  std::optional<double> m_q;
  std::optional<double> m_32;
  std::optional<double> m_n;
  double m_a = 0;
  bool m_n_level2 = false;
};

Metrics metrics(const BoundsRecord& rec);

/// classical <= qubit <= qutrit <= npa <= algebraic on the values present, with slack.
/// Returns the first violated pair as text, or nothing.
std::optional<std::string> ordering_violation(const BoundsRecord& rec, double slack = 1e-6);

}  // namespace bellcpt
