#pragma once

// Brute-force reference implementations for tests. Nothing here calls into the
// library's linear algebra, DD or canonical-form code.

#include "bellcpt/exactlinalg.hpp"
#include "bellcpt/scenario.hpp"

#include <random>
#include <set>
#include <vector>

namespace oracle {

using bellcpt::BigInt;
using bellcpt::IntVector;

/// Rank over Q by plain rational-free Bareiss elimination on a copy.
std::size_t rank(std::vector<IntVector> rows);

/// One nonzero kernel vector of `rows` (cols wide) if the kernel is one-dimensional.
std::optional<IntVector> kernel_line(const std::vector<IntVector>& rows, std::size_t cols);

/// All facet normals n (n . r <= 0 for every ray, primitive) of a full-dimensional
/// cone, by trying every (d-1)-subset of rays.
std::set<IntVector> facets_by_subsets(const std::vector<IntVector>& rays);

/// Lex-min coefficient vector over the full local-relabeling orbit. Elements are
/// enumerated one by one and applied to the tuple index directly.
IntVector orbit_min(const bellcpt::Scenario& s, const IntVector& b, bool party_perms = true,
                    bool setting_perms = true, bool flips = true);
/// Every image of b (with repetitions), for small scenarios.
std::vector<IntVector> orbit(const bellcpt::Scenario& s, const IntVector& b, bool party_perms = true,
                             bool setting_perms = true, bool flips = true);

/// Max over deterministic assignments of sum_{s != 0} -b_s prod x.
BigInt classical_max(const bellcpt::Scenario& s, const IntVector& b);

/// Random full-dimensional integer point set in dimension dim (returned as lifted
/// rays (1, x)). Coordinates in [-range, range].
std::vector<IntVector> random_full_dim_rays(std::mt19937_64& rng, int dim, int points, int range);

}  // namespace oracle
