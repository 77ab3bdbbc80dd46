#include "bellcpt/errors.hpp"
#include "bellcpt/fixtures.hpp"
#include "bellcpt/io.hpp"
#include "bellcpt/npa.hpp"

#include <doctest.h>

#include <cstdio>
#include <random>

using namespace bellcpt;

TEST_CASE("class list round trip") {
  const auto facets = local_polytope_facets(Scenario({2, 2}));
  const auto list = to_class_list(classify(facets));
  REQUIRE(list.size() == 2);
  const auto text = write_class_list(list);
  CHECK(text.find("class 1: members=") == 0);
  CHECK(read_class_list(text) == list);
  CHECK(write_class_list(read_class_list(text)) == text);
}

TEST_CASE("class list from a generalization keeps xi comments") {
  const auto classes = generalize(fixture("chsh"), {2}, {});
  const auto list = to_class_list(classes);
  bool has_xi = false;
  for (const auto& e : list)
    for (const auto& c : e.comments) has_xi = has_xi || c.starts_with("xi: ");
  CHECK(has_xi);
  CHECK(read_class_list(write_class_list(list)) == list);
}

TEST_CASE("class list errors") {
  CHECK_THROWS_AS(read_class_list("class x: members=1\nscenario: n=2 settings=2,2\nbound: 2\n1,1: 1\n"), ParseError);
  try {
    (void)read_class_list("class 1: members=1\nscenario: n=2 settings=2,2\nbound: 2\n1,1: q\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("seesaw record round trip") {
  std::mt19937_64 rng(5);
  for (const auto& name : {"chsh", "mermin", "i3322"}) {
    for (int d : {2, 3}) {
      SeesawConfig cfg;
      cfg.local_dim = d;
      cfg.restarts = 3;
      cfg.seed = rng();
      const auto q = fixture(name);
      const auto r = seesaw(q, cfg);
      const auto rec = SeesawRecord::of(name, q, cfg, r);
      const auto text = write_seesaw_record(rec);
      const auto back = read_seesaw_record(text);
      CHECK(back == rec);
      CHECK(write_seesaw_record(back) == text);
      CHECK(back.observables.size() == static_cast<std::size_t>(q.scenario().parties()));
    }
  }
  CHECK_THROWS_AS(read_seesaw_record("{\"name\": 3"), ParseError);
  CHECK_THROWS_AS(read_seesaw_record("{}"), ParseError);
}

TEST_CASE("npa sidecar") {
  const auto q = fixture("i3322-gen-400");
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(inequality_hash(q)));
  const std::vector<NpaValue> vals{{"i3322-gen-400", "", 21.3, 21.238, "imported"},
                                   {"other", hash, std::nullopt, 5.0, "solved"}};
  const auto back = read_npa_sidecar(write_npa_sidecar(vals));
  CHECK(back == vals);
  CHECK(find_npa_value(vals, "i3322-gen-400", q)->name == "other");
  CHECK(find_npa_value(vals, "i3322-gen-400", fixture("chsh"))->level3 == 21.238);
  CHECK_FALSE(find_npa_value(vals, "missing", fixture("chsh")).has_value());
  CHECK_THROWS_AS(read_npa_sidecar("[1, 2"), ParseError);
}

TEST_CASE("results round trip, validation and report") {
  ResultRecord r;
  r.name = "i3322-gen-400";
  r.inequality = fixture("i3322-gen-400");
  r.bounds = BoundsRecord::of(r.inequality);
  r.bounds.qubit = 18.5;
  r.bounds.qutrit = 18.9;
  r.bounds.npa3 = 21.238;
  r.bounds.npa_source = "imported";
  const auto text = write_results({r});
  const auto back = read_results(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == r);
  CHECK(write_results(back) == text);

  const auto csv = write_report_csv(back);
  CHECK(csv.starts_with("name,bound,algebraic,qubit,qutrit,npa2,npa3,m_Q,m_32,m_N,m_A\n"));
  CHECK(csv.find("i3322-gen-400,18,96,18.500000,18.900000,,21.238000") != std::string::npos);

  auto bad = r;
  bad.bounds.qutrit = 30.0;
  CHECK_THROWS_AS(read_results(write_results({bad})), InvariantError);
  auto wrong = r;
  wrong.bounds.algebraic = 85;
  CHECK_THROWS_AS(read_results(write_results({wrong})), InvariantError);
  CHECK_THROWS_AS(read_results("not json"), ParseError);
}
