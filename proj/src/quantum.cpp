#include "bellcpt/quantum.hpp"

#include "bellcpt/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

namespace bellcpt {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// out = (I x .. x X at factor q x .. x I) v
void apply_local(const CVector& v, CVector& out, int n, int d, int q, const CMatrix& x) {
  const std::size_t stride = ipow(static_cast<std::size_t>(d), n - 1 - q);
  const std::size_t block = stride * static_cast<std::size_t>(d);
  const std::size_t total = static_cast<std::size_t>(v.size());
  out.resize(v.size());
  for (std::size_t hi = 0; hi < total; hi += block)
    for (std::size_t lo = 0; lo < stride; ++lo) {
      const std::size_t base = hi + lo;
      for (int i = 0; i < d; ++i) {
        Complex acc = 0;
        for (int j = 0; j < d; ++j) acc += x(i, j) * v[static_cast<Eigen::Index>(base + static_cast<std::size_t>(j) * stride)];
        out[static_cast<Eigen::Index>(base + static_cast<std::size_t>(i) * stride)] = acc;
      }
    }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next++;
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace

bool is_observable(const CMatrix& x, double tol) {
  if (x.rows() != x.cols() || x.rows() == 0) return false;
  if ((x - x.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff())) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x);
  for (double e : es.eigenvalues())
    if (std::abs(std::abs(e) - 1.0) > tol) return false;
  return true;
}

int local_dimension(const Scenario& s, const Observables& obs) {
  if (static_cast<int>(obs.size()) != s.parties()) throw InvariantError("observables: wrong number of parties");
  int d = -1;
  for (int p = 0; p < s.parties(); ++p) {
    const auto& list = obs[static_cast<std::size_t>(p)];
    if (static_cast<int>(list.size()) != s.settings(p))
      throw InvariantError("observables: wrong number of settings for party " + letter_name(p, 1).substr(0, 1));
    for (const auto& x : list) {
      if (x.rows() != x.cols()) throw InvariantError("observables: non-square matrix");
      if (d < 0) d = static_cast<int>(x.rows());
      if (x.rows() != d) throw InvariantError("observables: local dimensions differ");
    }
  }
  if (d <= 0) throw InvariantError("observables: empty set");
  return d;
}

CMatrix bell_operator(const Inequality& ineq, const Observables& obs) {
  const Scenario& s = ineq.scenario();
  const int d = local_dimension(s, obs);
  const auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), s.parties()));
  CMatrix b = CMatrix::Zero(dim, dim);
  const CMatrix id = CMatrix::Identity(d, d);
  const auto& coeffs = ineq.coefficients();
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    const double c = -coeffs[i].get_d();
    const auto t = s.tuple_of(i);
    CMatrix term = CMatrix::Identity(1, 1);
    for (int p = 0; p < s.parties(); ++p) {
      const int st = t[static_cast<std::size_t>(p)];
      term = kron(term, st == 0 ? id : obs[static_cast<std::size_t>(p)][static_cast<std::size_t>(st - 1)]);
    }
    b += c * term;
  }
  return b;
}

double expectation(const CMatrix& op, const CVector& psi) { return psi.dot(op * psi).real(); }

StateUpdate optimal_state(const CMatrix& bell) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((bell + bell.adjoint()) / 2.0);
  const Eigen::Index top = es.eigenvalues().size() - 1;
  return {es.eigenvalues()[top], es.eigenvectors().col(top).normalized()};
}

CMatrix dichotomic_sign(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
  Eigen::VectorXd sg(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < sg.size(); ++i) sg[i] = es.eigenvalues()[i] >= 0 ? 1.0 : -1.0;
  CMatrix x = es.eigenvectors() * sg.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return (x + x.adjoint()) / 2.0;
}

std::vector<CMatrix> effective_operators(const Inequality& ineq, const Observables& obs, int party,
                                         const CVector& psi) {
  const Scenario& s = ineq.scenario();
  const int n = s.parties();
  const int d = local_dimension(s, obs);
  const int m = s.settings(party);
  std::vector<CVector> phi(static_cast<std::size_t>(m), CVector::Zero(psi.size()));
  const auto& coeffs = ineq.coefficients();
  CVector cur, tmp;
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    const auto t = s.tuple_of(i);
    const int own = t[static_cast<std::size_t>(party)];
    if (own == 0) continue;
    cur = psi;
    for (int q = 0; q < n; ++q) {
      const int st = t[static_cast<std::size_t>(q)];
      if (q == party || st == 0) continue;
      apply_local(cur, tmp, n, d, q, obs[static_cast<std::size_t>(q)][static_cast<std::size_t>(st - 1)]);
      cur.swap(tmp);
    }
    phi[static_cast<std::size_t>(own - 1)] += -coeffs[i].get_d() * cur;
  }

  const std::size_t stride = ipow(static_cast<std::size_t>(d), n - 1 - party);
  const std::size_t block = stride * static_cast<std::size_t>(d);
  const std::size_t total = static_cast<std::size_t>(psi.size());
  std::vector<CMatrix> out;
  for (int k = 0; k < m; ++k) {
    CMatrix mm = CMatrix::Zero(d, d);
    const auto& f = phi[static_cast<std::size_t>(k)];
    for (std::size_t hi = 0; hi < total; hi += block)
      for (std::size_t lo = 0; lo < stride; ++lo)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            mm(i, j) += f[static_cast<Eigen::Index>(hi + lo + static_cast<std::size_t>(i) * stride)] *
                        std::conj(psi[static_cast<Eigen::Index>(hi + lo + static_cast<std::size_t>(j) * stride)]);
    out.push_back((mm + mm.adjoint()) / 2.0);
  }
  return out;
}

void update_party(const Inequality& ineq, Observables& obs, int party, const CVector& psi) {
  auto h = effective_operators(ineq, obs, party, psi);
  for (std::size_t k = 0; k < h.size(); ++k) obs[static_cast<std::size_t>(party)][k] = dichotomic_sign(h[k]);
}

CMatrix random_observable(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXcd sg(dim);
  for (int i = 0; i < dim; ++i) sg[i] = coin(rng) ? 1.0 : -1.0;
  CMatrix x = q * sg.asDiagonal() * q.adjoint();
  return (x + x.adjoint()) / 2.0;
}

Observables random_observables(const Scenario& s, int dim, std::mt19937_64& rng) {
  Observables obs(static_cast<std::size_t>(s.parties()));
  for (int p = 0; p < s.parties(); ++p)
    for (int k = 0; k < s.settings(p); ++k) obs[static_cast<std::size_t>(p)].push_back(random_observable(dim, rng));
  return obs;
}

Observables embed_observables(const Observables& obs, int dim) {
  Observables out = obs;
  for (auto& list : out)
    for (auto& x : list) {
      if (x.rows() > dim) throw InvariantError("embed_observables: target dimension is smaller");
      CMatrix y = CMatrix::Identity(dim, dim);
      y.topLeftCorner(x.rows(), x.cols()) = x;
      x = std::move(y);
    }
  return out;
}

void SeesawConfig::validate() const {
  if (local_dim < 1) throw InvariantError("seesaw: local dimension must be positive");
  if (restarts < 1) throw InvariantError("seesaw: need at least one restart");
  if (!(tolerance > 0)) throw InvariantError("seesaw: tolerance must be positive");
  if (survivors < 1) throw InvariantError("seesaw: need at least one survivor");
}

double seesaw_sweep(const Inequality& ineq, Observables& obs, CVector& psi) {
  double value = 0;
  for (int p = 0; p < ineq.scenario().parties(); ++p) {
    update_party(ineq, obs, p, psi);
    auto st = optimal_state(bell_operator(ineq, obs));
    psi = std::move(st.state);
    value = st.value;
  }
  return value;
}

namespace {

struct Run {
  Observables obs;
  CVector psi;
  RestartTrace trace;
  bool pinned = false;
};

}  // namespace

SeesawResult seesaw(const Inequality& ineq, const SeesawConfig& cfg) {
  cfg.validate();
  const Scenario& s = ineq.scenario();
  const std::size_t n_runs = cfg.restarts + (cfg.initial ? 1 : 0);
  std::vector<Run> runs(n_runs);

  parallel_for(n_runs, cfg.threads, [&](std::size_t r) {
    Run& run = runs[r];
    run.trace.restart = r;
    if (cfg.initial && r == cfg.restarts) {
      run.obs = embed_observables(*cfg.initial, cfg.local_dim);
      local_dimension(s, run.obs);
      run.pinned = true;
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      run.obs = random_observables(s, cfg.local_dim, rng);
    }
    auto st = optimal_state(bell_operator(ineq, run.obs));
    run.psi = std::move(st.state);
    run.trace.values.push_back(st.value);
    for (std::size_t it = 0; it < cfg.warmup && it < cfg.max_iterations; ++it)
      run.trace.values.push_back(seesaw_sweep(ineq, run.obs, run.psi));
  });

  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < n_runs; ++r) order.push_back(r);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return runs[a].trace.values.back() > runs[b].trace.values.back();
  });
  std::vector<std::size_t> keep;
  for (std::size_t r : order)
    if (keep.size() < cfg.survivors) keep.push_back(r);
  for (std::size_t r = 0; r < n_runs; ++r)
    if (runs[r].pinned && std::find(keep.begin(), keep.end(), r) == keep.end()) keep.push_back(r);

  parallel_for(keep.size(), cfg.threads, [&](std::size_t k) {
    Run& run = runs[keep[k]];
    run.trace.refined = true;
    auto& v = run.trace.values;
    if (v.size() >= 2 && v[v.size() - 1] - v[v.size() - 2] < cfg.tolerance) run.trace.converged = true;
    while (!run.trace.converged && v.size() - 1 < cfg.max_iterations) {
      const double prev = v.back();
      v.push_back(seesaw_sweep(ineq, run.obs, run.psi));
      if (v.back() - prev < cfg.tolerance) run.trace.converged = true;
    }
  });

  SeesawResult res;
  bool have = false;
  for (std::size_t r = 0; r < n_runs; ++r) {
    const double v = runs[r].trace.values.back();
    if (!have || v > res.value) {
      have = true;
      res.value = v;
      res.best_restart = r;
    }
  }
  Run& best = runs[res.best_restart];
  res.state = best.psi;
  res.observables = best.obs;
  res.converged = best.trace.converged;
  for (auto& run : runs) res.traces.push_back(std::move(run.trace));
  return res;
}

BigInt algebraic_bound(const Inequality& ineq) {
  BigInt t = 0;
  const auto& b = ineq.coefficients();
  for (std::size_t i = 1; i < b.size(); ++i) t += abs(b[i]);
  return t;
}

BoundsRecord BoundsRecord::of(const Inequality& ineq) {
  BoundsRecord r;
  r.classical = ineq.bound();
  r.algebraic = algebraic_bound(ineq);
  return r;
}

Metrics metrics(const BoundsRecord& rec) {
  if (rec.classical <= 0) throw InvariantError("metrics: classical bound must be positive");
  Metrics m;
  const double b0 = rec.classical.get_d();
  m.m_a = 100.0 * (rec.algebraic.get_d() - b0) / b0;
  if (rec.qutrit) m.m_q = 100.0 * (*rec.qutrit / b0 - 1.0);
  if (rec.qutrit && rec.qubit) m.m_32 = 100.0 * (*rec.qutrit / *rec.qubit - 1.0);
  const std::optional<double> npa = rec.npa3 ? rec.npa3 : rec.npa2;
  if (rec.qutrit && npa) {
    m.m_n = 100.0 * (*npa / *rec.qutrit - 1.0);
    m.m_n_level2 = !rec.npa3;
  }
  return m;
}

std::optional<std::string> ordering_violation(const BoundsRecord& rec, double slack) {
  std::vector<std::pair<const char*, double>> chain;
  chain.emplace_back("classical", rec.classical.get_d());
  if (rec.qubit) chain.emplace_back("qubit", *rec.qubit);
  if (rec.qutrit) chain.emplace_back("qutrit", *rec.qutrit);
  if (rec.npa3) chain.emplace_back("npa3", *rec.npa3);
  if (rec.npa2) chain.emplace_back("npa2", *rec.npa2);
  chain.emplace_back("algebraic", rec.algebraic.get_d());
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (std::size_t j = i + 1; j < chain.size(); ++j)
      if (chain[i].second > chain[j].second + slack)
        return std::string(chain[i].first) + " " + std::to_string(chain[i].second) + " exceeds " + chain[j].first +
               " " + std::to_string(chain[j].second);
  return std::nullopt;
}

}  // namespace bellcpt
