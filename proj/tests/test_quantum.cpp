#include "bellcpt/errors.hpp"
#include "bellcpt/fixtures.hpp"
#include "bellcpt/quantum.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bellcpt;

namespace {

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

double value_of(const Inequality& q, const Observables& obs, const CVector& psi) {
  return expectation(bell_operator(q, obs), psi);
}

CVector random_state(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

}  // namespace

TEST_CASE("textbook CHSH observables reach Tsirelson's bound") {
  const auto chsh = fixture("chsh");
  const double r = 1 / std::sqrt(2.0);
  Observables obs{{pauli_z(), pauli_x()}, {r * (pauli_z() + pauli_x()), r * (pauli_z() - pauli_x())}};
  for (const auto& p : obs)
    for (const auto& x : p) CHECK(is_observable(x));
  CHECK(local_dimension(chsh.scenario(), obs) == 2);
  const auto b = bell_operator(chsh, obs);
  CHECK((b - b.adjoint()).norm() < 1e-12);
  CHECK(optimal_state(b).value == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("GHZ observables give Mermin value 4") {
  const auto m = fixture("mermin");
  Observables obs(3, {pauli_x(), pauli_y()});
  CHECK(optimal_state(bell_operator(m, obs)).value == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("observable checks") {
  CHECK_FALSE(is_observable(CMatrix::Identity(2, 2) * 0.5));
  CMatrix n(2, 2);
  n << 0, 1, 0, 0;
  CHECK_FALSE(is_observable(n));
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) CHECK(is_observable(random_observable(2 + k % 3, rng)));
  const auto obs = random_observables(Scenario({2, 3}), 3, rng);
  CHECK(local_dimension(Scenario({2, 3}), obs) == 3);
  CHECK_THROWS_AS(local_dimension(Scenario({2, 2}), obs), InvariantError);
  auto bad = obs;
  bad[1][0] = random_observable(2, rng);
  CHECK_THROWS_AS(local_dimension(Scenario({2, 3}), bad), InvariantError);
  const auto big = embed_observables(obs, 5);
  CHECK(local_dimension(Scenario({2, 3}), big) == 5);
  CHECK(big[0][0].topLeftCorner(3, 3).isApprox(obs[0][0]));
  CHECK(big[0][0](4, 4) == Complex(1, 0));
}

TEST_CASE("dichotomic sign") {
  CMatrix h(2, 2);
  h << 2, 0, 0, -3;
  const auto s = dichotomic_sign(h);
  CHECK(s(0, 0).real() == doctest::Approx(1));
  CHECK(s(1, 1).real() == doctest::Approx(-1));
  CHECK(is_observable(dichotomic_sign(CMatrix::Zero(3, 3))));
}

TEST_CASE("effective operators are the linear coefficients of each party") {
  std::mt19937_64 rng(3);
  for (const auto& name : {"chsh", "mermin", "i3322", "gyni"}) {
    const auto q = fixture(name);
    const auto& s = q.scenario();
    for (int trial = 0; trial < 10; ++trial) {
      auto obs = random_observables(s, 2, rng);
      const auto psi = random_state(std::size_t{1} << s.parties(), rng);
      const int p = static_cast<int>(rng() % static_cast<unsigned>(s.parties()));
      const auto h = effective_operators(q, obs, p, psi);
      REQUIRE(static_cast<int>(h.size()) == s.settings(p));
      auto other = obs;
      double predicted = value_of(q, obs, psi);
      for (int st = 0; st < s.settings(p); ++st) {
        auto& x = other[static_cast<std::size_t>(p)][static_cast<std::size_t>(st)];
        const auto old = x;
        x = random_observable(2, rng);
        predicted += ((x - old) * h[static_cast<std::size_t>(st)]).trace().real();
      }
      CHECK(value_of(q, other, psi) == doctest::Approx(predicted).epsilon(1e-9));
    }
  }
}

TEST_CASE("party update is optimal for the fixed state") {
  std::mt19937_64 rng(4);
  const auto q = fixture("i3322");
  for (int trial = 0; trial < 20; ++trial) {
    auto obs = random_observables(q.scenario(), 2, rng);
    const auto psi = random_state(4, rng);
    const double before = value_of(q, obs, psi);
    update_party(q, obs, trial % 2, psi);
    const double after = value_of(q, obs, psi);
    CHECK(after >= before - 1e-12);
    for (int k = 0; k < 20; ++k) {
      auto alt = obs;
      for (auto& x : alt[static_cast<std::size_t>(trial % 2)]) x = random_observable(2, rng);
      CHECK(value_of(q, alt, psi) <= after + 1e-12);
    }
  }
}

TEST_CASE("seesaw reaches Tsirelson and traces never decrease") {
  SeesawConfig cfg;
  cfg.restarts = 10;
  const auto r = seesaw(fixture("chsh"), cfg);
  CHECK(r.value == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(r.converged);
  CHECK(r.traces.size() == 10);
  for (const auto& t : r.traces)
    for (std::size_t i = 1; i < t.values.size(); ++i) CHECK(t.values[i] >= t.values[i - 1] - 1e-9);
  CHECK(std::abs(expectation(bell_operator(fixture("chsh"), r.observables), r.state) - r.value) < 1e-9);
}

TEST_CASE("seesaw monotonicity on random restarts") {
  for (const auto& name : {"i3322", "mermin", "gyni", "i3322-gen-400"}) {
    SeesawConfig cfg;
    cfg.restarts = 8;
    cfg.survivors = 3;
    cfg.max_iterations = 60;
    cfg.seed = 17;
    const auto r = seesaw(fixture(name), cfg);
    for (const auto& t : r.traces)
      for (std::size_t i = 1; i < t.values.size(); ++i) CHECK(t.values[i] >= t.values[i - 1] - 1e-9);
    CHECK(r.value <= algebraic_bound(fixture(name)).get_d() + 1e-9);
    CHECK(r.value >= fixture(name).bound().get_d() - 1e-6);
  }
}

TEST_CASE("seesaw is reproducible and thread independent") {
  SeesawConfig cfg;
  cfg.restarts = 6;
  cfg.seed = 99;
  const auto a = seesaw(fixture("i3322"), cfg);
  cfg.threads = 3;
  const auto b = seesaw(fixture("i3322"), cfg);
  CHECK(a.value == b.value);
  CHECK(a.best_restart == b.best_restart);
}

TEST_CASE("qutrit warm start from the qubit optimum never loses") {
  const auto q = fixture("i3322");
  SeesawConfig cfg;
  cfg.restarts = 10;
  const auto two = seesaw(q, cfg);
  cfg.local_dim = 3;
  cfg.initial = embed_observables(two.observables, 3);
  const auto three = seesaw(q, cfg);
  CHECK(three.value >= two.value - 1e-9);
  CHECK(two.value == doctest::Approx(5.0).epsilon(1e-4));
}

TEST_CASE("seesaw config validation") {
  SeesawConfig cfg;
  cfg.local_dim = 0;
  CHECK_THROWS_AS(seesaw(fixture("chsh"), cfg), InvariantError);
  cfg = {};
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), InvariantError);
  cfg = {};
  cfg.tolerance = 0;
  CHECK_THROWS_AS(cfg.validate(), InvariantError);
}

TEST_CASE("algebraic bounds") {
  CHECK(algebraic_bound(fixture("chsh")) == 4);
  CHECK(algebraic_bound(fixture("i3322-gen-1")) == 28);
  CHECK(algebraic_bound(fixture("i3322-gen-400")) == 96);
  CHECK(algebraic_bound(fixture("i3322-gen-532")) == 86);
  CHECK(algebraic_bound(fixture("hybrid-198")) == 40);
}

TEST_CASE("metrics and ordering") {
  BoundsRecord rec = BoundsRecord::of(fixture("chsh"));
  CHECK(rec.classical == 2);
  CHECK(rec.algebraic == 4);
  rec.qubit = 2 * std::sqrt(2.0);
  rec.qutrit = 2 * std::sqrt(2.0);
  rec.npa2 = 2 * std::sqrt(2.0);
  auto m = metrics(rec);
  CHECK(*m.m_q == doctest::Approx(41.421356).epsilon(1e-6));
  CHECK(*m.m_32 == doctest::Approx(0.0));
  CHECK(*m.m_n == doctest::Approx(0.0));
  CHECK(m.m_n_level2);
  CHECK(m.m_a == doctest::Approx(100.0));
  CHECK_FALSE(ordering_violation(rec).has_value());
  rec.npa3 = 2.9;
  CHECK(metrics(rec).m_n_level2 == false);
  CHECK(ordering_violation(rec).has_value());  // npa3 above npa2
  rec.npa3.reset();
  rec.qutrit = 2.5;
  CHECK(ordering_violation(rec).has_value());
  BoundsRecord empty = BoundsRecord::of(fixture("chsh"));
  CHECK_FALSE(metrics(empty).m_q.has_value());
}
