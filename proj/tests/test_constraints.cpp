#include "bellcpt/constraints.hpp"
#include "bellcpt/errors.hpp"
#include "bellcpt/fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace bellcpt;

TEST_CASE("xi enumeration order") {
  const Scenario t({2, 2, 2});
  const auto xs = enumerate_xi(t, Embedding::leading(2));
  REQUIRE(xs.size() == 4);
  CHECK(xs[0].values == std::vector<std::vector<int>>{{-1, -1}});
  CHECK(xs[1].values == std::vector<std::vector<int>>{{-1, 1}});
  CHECK(xs[3].values == std::vector<std::vector<int>>{{1, 1}});
  const Embedding ac{{0, 2}}, twice{{0, 0}};
  CHECK(enumerate_xi(Scenario({2, 3, 2}), ac).size() == 8);
  CHECK(ac.extra_parties(t) == std::vector<int>{1});
  CHECK_THROWS_AS(twice.extra_parties(t), InvariantError);
}

TEST_CASE("extended behaviours of CHSH saturate Mermin") {
  const auto chsh = fixture("chsh");
  const auto mermin = fixture("mermin");
  const Scenario t = mermin.scenario();
  const XiAssignment plus{{{1, 1}}};
  const auto ext = build_extended_behaviors(chsh, plus, t);
  CHECK(ext.size() == 8);
  for (const auto& v : ext) {
    CHECK(v.coords.size() == t.lifted_dimension());
    CHECK(v.assignment[4] == 1);
    CHECK(v.assignment[5] == 1);
    CHECK(mermin.evaluate(v.coords) == mermin.bound());
  }
  const auto g = saturation_rows(ext);
  CHECK(g.rows() == 8);
  CHECK(g.cols() == t.lifted_dimension());
  for (std::size_t r = 0; r < g.rows(); ++r) {
    CHECK(g.tags()[r] == RowKind::Saturation);
    CHECK(dot(g.matrix().row(r), mermin.coefficients()) == 0);
    CHECK(g.matrix()(r, 0) == 1);
  }
}

TEST_CASE("extended behaviours reject bad input") {
  const auto chsh = fixture("chsh");
  const Scenario t({2, 2, 2});
  const XiAssignment short_xi{{{1}}}, zero_xi{{{1, 0}}}, plus{{{1, 1}}};
  const Embedding ab{{0, 1}};
  const Scenario wide({2, 3, 2});
  CHECK_THROWS_AS(build_extended_behaviors(chsh, short_xi, t), InvariantError);
  CHECK_THROWS_AS(build_extended_behaviors(chsh, zero_xi, t), InvariantError);
  CHECK_THROWS_AS(build_extended_behaviors(chsh, plus, wide, ab), InvariantError);
  const auto loose = parse_expression(Scenario({2, 2}), "A1B1 <= 2");
  CHECK_THROWS_AS(build_extended_behaviors(loose, plus, t), InvariantError);
}

TEST_CASE("embedding at non-leading positions") {
  const auto chsh = fixture("chsh");
  const Scenario t({2, 2, 2});
  const auto ext = build_extended_behaviors(chsh, XiAssignment{{{-1, 1}}}, t, Embedding{{0, 2}});
  REQUIRE(ext.size() == 8);
  for (const auto& v : ext) {
    CHECK(v.assignment[2] == -1);
    CHECK(v.assignment[3] == 1);
  }
}

TEST_CASE("symmetry rows annihilate symmetric inequalities") {
  for (const auto& name : {"i3322-gen-1", "i3322-gen-400", "mermin"}) {
    const auto f = fixture(name);
    const auto gens = fixture_symmetry("party-perm-3", f.scenario());
    const auto rows = symmetry_rows(gens, f.scenario());
    CHECK(rows.rows() > 0);
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      CHECK_FALSE(is_zero(rows.matrix().row(r)));
      CHECK(rows.tags()[r] == RowKind::Symmetry);
      CHECK(dot(rows.matrix().row(r), f.coefficients()) == 0);
    }
  }
  const auto gyni = fixture("gyni");
  const auto r = symmetry_rows(fixture_symmetry("gyni", gyni.scenario()), gyni.scenario());
  for (std::size_t i = 0; i < r.rows(); ++i) CHECK(dot(r.matrix().row(i), gyni.coefficients()) == 0);
}

TEST_CASE("custom rows and append") {
  auto cs = custom_rows({to_int_vector({0, 1, -1}), to_int_vector({1, 0, 0})}, 3);
  CHECK(cs.rows() == 2);
  CHECK(cs.tags()[0] == RowKind::Custom);
  ConstraintSystem other(3);
  other.add_row(to_int_vector({0, 0, 1}), RowKind::Symmetry);
  cs.append(other);
  CHECK(cs.rows() == 3);
  CHECK(cs.tags()[2] == RowKind::Symmetry);
  const std::vector<IntVector> narrow_rows{to_int_vector({1, 2})};
  CHECK_THROWS_AS(custom_rows(narrow_rows, 3), InvariantError);
  CHECK_THROWS_AS(cs.append(ConstraintSystem(4)), InvariantError);
  CHECK(std::string(to_string(RowKind::Saturation)) != std::string(to_string(RowKind::Custom)));
}
