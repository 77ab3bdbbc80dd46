#include "bellcpt/errors.hpp"
#include "bellcpt/fixtures.hpp"
#include "bellcpt/inequality.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace bellcpt;

namespace {

Inequality random_inequality(std::mt19937_64& rng, const Scenario& s, int range) {
  std::uniform_int_distribution<int> u(-range, range);
  IntVector b(s.lifted_dimension());
  while (true) {
    for (auto& x : b) x = (rng() % 3 == 0) ? u(rng) : 0;
    if (!is_zero(std::span<const BigInt>(b).subspan(1))) return Inequality(s, b);
  }
}

Scenario random_scenario(std::mt19937_64& rng) {
  const int n = 1 + static_cast<int>(rng() % 3);
  std::vector<int> m;
  for (int i = 0; i < n; ++i) m.push_back(1 + static_cast<int>(rng() % 3));
  return Scenario(m);
}

}  // namespace

TEST_CASE("orientation and normalization") {
  const Scenario s({2, 2});
  IntVector c(9);
  c[s.index_of({1, 1})] = 2;
  c[s.index_of({2, 2})] = -2;
  const auto q = Inequality::from_expression(s, c, 4);
  CHECK(q.bound() == 2);
  CHECK(q.expression_coefficient(s.index_of({1, 1})) == 1);
  CHECK(q.cone_normal()[0] == -2);
  CHECK(q.term_count() == 2);
  CHECK(Inequality::from_cone_normal(s, q.cone_normal()) == q);
}

TEST_CASE("every fixture is a valid facet with its stated bound") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto f = fixture(name);
    CHECK(is_valid_bell_inequality(f));
    CHECK(classical_maximum(f) == f.bound());
    CHECK_FALSE(is_trivial(f));
    if (f.scenario().vertex_count() <= 4096) CHECK(is_facet_inequality(f));
  }
  CHECK_THROWS_AS(fixture("nope"), InvariantError);
}

TEST_CASE("fixture bounds") {
  CHECK(fixture("chsh").bound() == 2);
  CHECK(fixture("mermin").bound() == 2);
  CHECK(fixture("gyni").bound() == 4);
  CHECK(fixture("i3322-gen-1").bound() == 8);
  const int expect[] = {15, 15, 19, 19, 23, 38, 38, 51, 51, 55, 55, 76, 76};
  for (int k = 1; k <= 13; ++k) CHECK(fixture("i4422-gen-" + std::to_string(k)).bound() == expect[k - 1]);
}

TEST_CASE("classical maximum agrees with the oracle") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_scenario(rng);
    const auto q = random_inequality(rng, s, 4);
    CHECK(classical_maximum(q) == oracle::classical_max(s, q.coefficients()));
  }
}

TEST_CASE("trivial facets") {
  const Scenario s({2, 2});
  // (1 + A1)(1 - B2) >= 0
  IntVector b(9);
  b[0] = 1;
  b[s.index_of({1, 0})] = 1;
  b[s.index_of({0, 2})] = -1;
  b[s.index_of({1, 2})] = -1;
  const Inequality t(s, b);
  CHECK(is_trivial(t));
  CHECK(is_facet_inequality(t));
  CHECK_FALSE(is_trivial(fixture("chsh")));
}

TEST_CASE("text round trip on random inequalities") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_scenario(rng);
    const auto q = random_inequality(rng, s, 9);
    CHECK(read_inequality(write_inequality(q, {"note"})) == q);
    CHECK(parse_expression(s, expression_string(q)) == q);
  }
}

TEST_CASE("several blocks in one file") {
  const std::string text = write_inequality(fixture("chsh")) + "\n" + write_inequality(fixture("mermin"));
  const auto all = read_inequalities(text);
  REQUIRE(all.size() == 2);
  CHECK(all[1] == fixture("mermin"));
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      (void)read_inequality(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("scenario: n=2 settings=2,2\nbound: x\n") == 2);
  CHECK(line_of("scenario: n=2 settings=2,2\nbound: 2\n1,1: 1\n1,3: 1\n") == 4);
  CHECK(line_of("scenario: n=2 settings=2,2\nbound: 2\n1,1: 1\n1,1: 2\n") == 4);
  CHECK(line_of("scenario: n=2 settings=2,2\nbound: 2\n0,0: 1\n") == 3);
  CHECK(line_of("scenario: n=2 settings=2,2\nbound: 2\n1,1,1: 1\n") == 3);
  CHECK(line_of("# c\nbound: 2\n") != 0);
  CHECK_THROWS_AS(read_inequality("scenario: n=2 settings=2,2\n1,1: 1\n"), ParseError);
  CHECK_THROWS_AS(parse_expression(Scenario({2, 2}), "A1B3 <= 2"), ParseError);
  CHECK_THROWS_AS(parse_expression(Scenario({2, 2}), "A1B1 +"), ParseError);
}

TEST_CASE("expression parser variants") {
  const Scenario s({2, 2});
  CHECK(parse_expression(s, "<A1B1> + <A1B2> + <A2B1> - <A2B2> ≤ 2") == fixture("chsh"));
  CHECK(parse_expression(s, "A1*B1 + A1*B2 + A2*B1 - A2*B2 <= 2") == fixture("chsh"));
}

TEST_CASE("symmetric notation") {
  CHECK(symmetric_notation(fixture("chsh")) == "(11) + (21) - (22) <= 2");
  CHECK(symmetric_notation(fixture("mermin")) == "(211) - (222) <= 2");
  for (const auto& name : {"chsh", "mermin", "i3322-gen-1", "i3322-gen-400", "i3322-gen-532", "i3322-gen-1507"}) {
    const auto f = fixture(name);
    const auto text = symmetric_notation(f);
    REQUIRE(text.has_value());
    CHECK(parse_symmetric(f.scenario(), *text) == f);
  }
  const Scenario s({2, 2});
  CHECK_FALSE(symmetric_notation(parse_expression(s, "A1B2 + A1 <= 2")).has_value());
}

TEST_CASE("substitution with constants recovers CHSH from Mermin") {
  const auto m = fixture("mermin");
  auto sub = Substitution::identity(m.scenario());
  sub.target = Scenario({2, 2});
  for (auto& t : sub.letters[2]) {
    t.constant = true;
    t.value = 1;
  }
  CHECK(is_positive_multiple(substitute(m, sub), fixture("chsh").coefficients()));
}

TEST_CASE("setting lift stays a facet") {
  const auto l = lift_settings(fixture("chsh"), {3, 2});
  CHECK(l.scenario() == Scenario({3, 2}));
  CHECK(l.bound() == 2);
  CHECK(is_facet_inequality(l));
  CHECK_THROWS(lift_settings(fixture("chsh"), {1, 2}));
}

TEST_CASE("positive multiples") {
  const auto a = to_int_vector({2, -4, 0});
  CHECK(is_positive_multiple(to_int_vector({1, -2, 0}), a));
  CHECK_FALSE(is_positive_multiple(to_int_vector({-1, 2, 0}), a));
  CHECK_FALSE(is_positive_multiple(to_int_vector({1, -2, 1}), a));
}
