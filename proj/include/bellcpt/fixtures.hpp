#pragma once

#include "bellcpt/inequality.hpp"
#include "bellcpt/relabeling.hpp"

#include <string>
#include <vector>

namespace bellcpt {

/// Named inequalities: chsh, mermin, i3322, i4422, gyni, i3322-gen-{1,400,1507,532},
/// i4422-gen-{1..13}, hybrid-{1,47,198,314}. Throws InvariantError for unknown names.
Inequality fixture(const std::string& name);
std::vector<std::string> fixture_names();

/// Named generator lists: party-perm-3, i4422, i4422-set1, i4422-set2, gyni, gyni-4,
/// hybrid. Each entry is parsed against `scenario`.
std::vector<Relabeling> fixture_symmetry(const std::string& name, const Scenario& scenario);
std::vector<std::string> fixture_symmetry_names();
/// Text of the named generator list, one generator per line.
std::string fixture_symmetry_text(const std::string& name);

}  // namespace bellcpt
