#include "bellcpt/fixtures.hpp"

#include "bellcpt/errors.hpp"

#include <map>

namespace bellcpt {

namespace {

enum class Notation { Plain, Symmetric };

struct Entry {
  std::vector<int> settings;
  Notation notation;
  const char* text;
};

const std::map<std::string, Entry>& table() {
  static const std::map<std::string, Entry> t = {
      {"chsh", {{2, 2}, Notation::Plain, "A1B1 + A1B2 + A2B1 - A2B2 <= 2"}},
      {"mermin", {{2, 2, 2}, Notation::Plain, "A1B1C2 + A1B2C1 + A2B1C1 - A2B2C2 <= 2"}},
      {"i3322",
       {{3, 3},
        Notation::Plain,
        "A1 - A2 + B1 - B2 - A1B1 + A1B2 + A2B1 - A2B2 + A1B3 + A2B3 + A3B1 + A3B2 <= 4"}},
      {"i4422",
       {{4, 4},
        Notation::Symmetric,
        "2(01) + 2(02) + (03) - (11) - (12) - (13) - (14) - (22) - (23) + (24) + (33) <= 7"}},
      {"gyni",
       {{2, 2, 2},
        Notation::Plain,
        "A1B1 + A2B1 + A1B2 + A2B2 + A1C1 - A2C1 + B1C1 + A1B1C1 - B2C1 - A2B2C1 + A1C2 - A2C2 - B1C2 + A2B1C2 "
        "+ B2C2 - A1B2C2 <= 4"}},
      {"i3322-gen-1", {{3, 3, 3}, Notation::Symmetric, "-(110) + (210) - (211) - (220) - (222) + 2(331) + 2(332) <= 8"}},
      {"i3322-gen-400",
       {{3, 3, 3},
        Notation::Symmetric,
        "5(100) + (110) - 5(111) + 3(200) - 3(210) + 3(211) - 2(220) + 2(221) - 2(300) + (310) + (311) + 2(322) "
        "- (330) - (333) <= 18"}},
      {"i3322-gen-1507",
       {{3, 3, 3},
        Notation::Symmetric,
        "8(100) - 4(110) + 3(111) + 4(200) - 3(210) + 2(211) - (220) + 2(221) - 2(222) - (300) - (310) + 3(311) "
        "+ 2(320) - (321) + (322) - (331) - (333) <= 21"}},
      {"i3322-gen-532",
       {{3, 3, 3},
        Notation::Symmetric,
        "3(100) - (110) - (111) - 4(200) + 2(210) - (220) + (221) + (222) - 3(300) + 2(310) - (320) + (321) "
        "- (322) + (331) + (332) <= 12"}},
      {"i4422-gen-1",
       {{4, 4, 4},
        Notation::Symmetric,
        "-(100) - 2(110) - (200) - 2(210) - 2(220) + (300) - (310) - (320) + (330) + (331) + (332) - 3(333) "
        "+ 2(441) - 2(442) <= 15"}},
      {"i4422-gen-2",
       {{4, 4, 4},
        Notation::Symmetric,
        "-(100) - 2(110) - (111) - (200) - 2(210) + (211) - 2(220) - (221) + (222) + (300) - (310) - (320) "
        "+ (330) + (331) + (332) - 3(333) + 2(441) - 2(442) <= 15"}},
      {"i4422-gen-3",
       {{4, 4, 4},
        Notation::Symmetric,
        "-2(100) - 2(110) - 2(200) - 2(210) - 2(220) - (300) - 2(310) - 2(320) + (330) - (333) + 2(441) "
        "- 2(442) <= 19"}},
      {"i4422-gen-4",
       {{4, 4, 4},
        Notation::Symmetric,
        "-2(100) - 2(110) - (111) - 2(200) - 2(210) + (211) - 2(220) - (221) + (222) - (300) - 2(310) - 2(320) "
        "+ (330) - (333) + 2(441) - 2(442) <= 19"}},
      {"i4422-gen-5",
       {{4, 4, 4},
        Notation::Symmetric,
        "3(100) - 3(110) + 2(111) + 3(200) - 3(210) - 3(220) + 2(221) + (300) - (310) + (311) - (320) + (321) "
        "+ (322) + (330) - (331) - (332) + (333) - 4(441) + 4(442) <= 23"}},
      {"i4422-gen-6",
       {{4, 4, 4},
        Notation::Symmetric,
        "3(100) + (110) - 3(111) + 3(200) + (210) + (211) + (220) - 3(221) + (222) + 4(300) + 3(310) - 3(311) "
        "+ 3(320) - 3(321) - 3(322) - 6(330) - (331) - (332) + 12(333) + 4(441) - 4(442) <= 38"}},
      {"i4422-gen-7",
       {{4, 4, 4},
        Notation::Symmetric,
        "3(100) + (110) - (111) + 3(200) + (210) - (211) + (220) - (221) - (222) + 4(300) + 3(310) - 3(311) "
        "+ 3(320) - 3(321) - 3(322) - 6(330) - (331) - (332) + 12(333) + 4(441) - 4(442) <= 38"}},
      {"i4422-gen-8",
       {{4, 4, 4},
        Notation::Symmetric,
        "2(100) - 5(110) + 2(200) - 5(210) - 5(220) + (300) - 4(310) + 3(311) - 4(320) + 3(321) + 3(322) "
        "+ (330) - 2(331) - 2(332) - 3(333) - 8(441) + 8(442) <= 51"}},
      {"i4422-gen-9",
       {{4, 4, 4},
        Notation::Symmetric,
        "2(100) - 5(110) - 4(111) + 2(200) - 5(210) + 4(211) - 5(220) - 4(221) + 4(222) + (300) - 4(310) "
        "+ 3(311) - 4(320) + 3(321) + 3(322) + (330) - 2(331) - 2(332) - 3(333) + 8(441) - 8(442) <= 51"}},
      {"i4422-gen-10",
       {{4, 4, 4},
        Notation::Symmetric,
        "(100) - 5(110) + (200) - 5(210) - 5(220) - (300) - 5(310) + 3(311) - 5(320) + 3(321) + 3(322) + (330) "
        "- 3(331) - 3(332) - (333) - 8(441) + 8(442) <= 55"}},
      {"i4422-gen-11",
       {{4, 4, 4},
        Notation::Symmetric,
        "(100) - 5(110) - 4(111) + (200) - 5(210) + 4(211) - 5(220) - 4(221) + 4(222) - (300) - 5(310) "
        "+ 3(311) - 5(320) + 3(321) + 3(322) + (330) - 3(331) - 3(332) - (333) + 8(441) - 8(442) <= 55"}},
      {"i4422-gen-12",
       {{4, 4, 4},
        Notation::Symmetric,
        "7(100) + (110) - (111) + 7(200) + (210) - (211) + (220) - (221) - (222) + 6(300) + 7(310) - 7(311) "
        "+ 7(320) - 7(321) - 7(322) - 12(330) - (331) - (332) + 22(333) - 8(441) + 8(442) <= 76"}},
      {"i4422-gen-13",
       {{4, 4, 4},
        Notation::Symmetric,
        "7(100) + (110) - 5(111) + 7(200) + (210) + 3(211) + (220) - 5(221) + 3(222) + 6(300) + 7(310) "
        "- 7(311) + 7(320) - 7(321) - 7(322) - 12(330) - (331) - (332) + 22(333) + 8(441) - 8(442) <= 76"}},
      {"hybrid-47",
       {{3, 3, 2},
        Notation::Plain,
        "C1 + C2 + B1 - B1C2 - B2 + B2C1 + A1 - A1C2 + 2 A1B1C2 + A1B2 - A1B2C1 - A1B3C1 - A1B3C2 - A2 + A2C1 "
        "+ A2B1 - A2B1C1 - A2B2 + 2 A2B2C1 - A2B2C2 + A2B3 - A2B3C2 - A3B1C1 - A3B1C2 + A3B2 - A3B2C2 - A3B3 "
        "- A3B3C1 <= 6"}},
      {"hybrid-1",
       {{3, 3, 2},
        Notation::Plain,
        "2 B1 - 2 B2 + 2 A1 - A1B1 + A1B1C1 + A1B2 - A1B2C1 + 2 A1B3C2 - 2 A2 + A2B1 - A2B1C1 - A2B2 + A2B2C1 "
        "+ 2 A2B3C2 + 2 A3B1C2 + 2 A3B2C2 <= 8"}},
      {"hybrid-314",
       {{3, 3, 2},
        Notation::Plain,
        "5 C1 + C2 + 2 B1 - 2 B1C1 - 2 B2 + 2 B2C1 + B3C1 + B3C2 + 2 A1 - 2 A1C1 + 2 A1B1C1 - 2 A1B1C2 + A1B2 "
        "- 2 A1B2C1 + A1B2C2 + A1B3 - 2 A1B3C1 + A1B3C2 - 2 A2 + 2 A2C1 + A2B1 - 2 A2B1C1 + A2B1C2 - 2 A2B2 "
        "+ 3 A2B2C1 + A2B2C2 + A2B3 - 3 A2B3C1 + A3C1 + A3C2 + A3B1 - 2 A3B1C1 + A3B1C2 + A3B2 - 3 A3B2C1 "
        "- 2 A3B3C1 - 2 A3B3C2 <= 12"}},
      {"hybrid-198",
       {{3, 3, 2},
        Notation::Plain,
        "3 C1 + C2 + 2 B1 - B1C1 - B1C2 - B2 + 2 B2C1 + B2C2 + B3 - B3C2 + 2 A1 - A1C1 - A1C2 - A1B1 + A1B1C1 "
        "+ A1B2 - A1B2C1 - A1B3C1 + A1B3C2 - A2 + 2 A2C1 + A2C2 + A2B1 - A2B1C1 - A2B2 - A2B2C2 + A2B3 "
        "- A2B3C1 + A3 - A3C2 - A3B1C1 + A3B1C2 + A3B2 - A3B2C1 <= 6"}},
  };
  return t;
}

const std::map<std::string, const char*>& symmetry_table() {
  static const std::map<std::string, const char*> t = {
      {"party-perm-3", "perm:ABC->BAC\nperm:ABC->CBA\n"},
      {"i4422", "perm:AB->BA\nA:(1 2); B4:-\n"},
      {"i4422-set1", "perm:ABC->BAC\nperm:ABC->CBA\nA:(1 2); B4:-; C4:-\n"},
      {"i4422-set2", "perm:ABC->BAC\nperm:ABC->CBA\nA:(1 2); B:(1 2); C4:-\n"},
      {"gyni", "A:(1 2); B:(1 2); C1:-; C2:-\nA:(1 2); C:(1 2); A:-; B:-\n"},
      {"gyni-4", "A:(1 2); B:(1 2); C1:-; C2:-\nA:(1 2); C:(1 2); A:-; B:-\n"},
      {"hybrid", "perm:ABC->BAC\n"},
  };
  return t;
}

}  // namespace

Inequality fixture(const std::string& name) {
  const auto& t = table();
  auto it = t.find(name);
  if (it == t.end()) throw InvariantError("unknown fixture '" + name + "'");
  const Scenario s(it->second.settings);
  return it->second.notation == Notation::Symmetric ? parse_symmetric(s, it->second.text)
                                                    : parse_expression(s, it->second.text);
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : table()) out.push_back(k);
  return out;
}

std::string fixture_symmetry_text(const std::string& name) {
  const auto& t = symmetry_table();
  auto it = t.find(name);
  if (it == t.end()) throw InvariantError("unknown symmetry set '" + name + "'");
  return it->second;
}

std::vector<Relabeling> fixture_symmetry(const std::string& name, const Scenario& scenario) {
  return parse_relabeling_list(fixture_symmetry_text(name), scenario);
}

std::vector<std::string> fixture_symmetry_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : symmetry_table()) out.push_back(k);
  return out;
}

}  // namespace bellcpt
