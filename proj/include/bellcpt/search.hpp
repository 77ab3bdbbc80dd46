#pragma once

#include "bellcpt/cone.hpp"
#include "bellcpt/constraints.hpp"
#include "bellcpt/inequality.hpp"
#include "bellcpt/relabeling.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace bellcpt {

/// Which local relabelings count as equivalences. Party permutations only ever mix
/// parties with equal setting counts.
struct GroupSpec {
  bool party_permutations = true;
  bool setting_permutations = true;
  bool sign_flips = true;
  /// Limit on search nodes visited by canonical_form.
  std::size_t max_nodes = 10'000'000;
};

/// Number of group elements (may be huge; saturates at SIZE_MAX).
std::size_t group_order(const Scenario& s, const GroupSpec& spec);

struct CanonicalResult {
  Inequality form;
  Relabeling element;  ///< apply(element, ineq) == form
};

/// Lexicographically smallest coefficient vector over the orbit of `ineq`. The search
/// fixes target letters block by block in index order and keeps every partial
/// relabeling that ties for the smallest prefix. Throws ResourceCapError past max_nodes.
CanonicalResult canonical_form_with_element(const Inequality& ineq, const GroupSpec& spec = {});
Inequality canonical_form(const Inequality& ineq, const GroupSpec& spec = {});

struct EquivalenceClass {
  Inequality canonical;
  /// First member encountered, as found (keeps any imposed symmetry visible).
  Inequality representative;
  std::size_t members_found = 0;
  /// One entry per distinct xi combination that produced a member (one XiAssignment per reduction).
  std::vector<std::vector<XiAssignment>> witnesses;
};

/// Groups by canonical form; classes appear in order of their first member.
std::vector<EquivalenceClass> classify(const std::vector<Inequality>& ineqs, const GroupSpec& spec = {});

/// Length of the class's expression: symmetric-notation terms when the representative
/// is party-symmetric, nonzero coefficients otherwise.
std::size_t simplicity(const EquivalenceClass& c);
/// By simplicity, then canonical vector.
void sort_classes(std::vector<EquivalenceClass>& classes);

/// Substituting xi for the parties outside `embedding` turns `candidate` into a positive
/// multiple of `lower` (bound included).
bool verify_reduction(const Inequality& candidate, const XiAssignment& xi, const Inequality& lower,
                      const Embedding& embedding);
bool verify_reduction(const Inequality& candidate, const XiAssignment& xi, const Inequality& lower);

/// A required reduction: `lower` must reappear when the remaining parties are fixed.
struct ReductionSpec {
  Inequality lower;
  Embedding embedding;
};

struct XiReport {
  std::size_t index = 0;
  std::size_t total = 0;
  std::vector<XiAssignment> xi;
  std::size_t kernel_dim = 0;
  std::size_t projected_rays = 0;
  std::size_t candidates = 0;
  std::size_t facets = 0;
  std::size_t reduced = 0;
  double seconds = 0;
};

struct GeneralizeOptions {
  DdOptions dd;
  GroupSpec group;
  std::size_t threads = 1;
  /// Keep positivity facets among the results.
  bool keep_trivial = false;
  std::function<void(const XiReport&)> progress;
};

/// CPT search over every xi combination: saturation rows for each reduction, invariance
/// rows for the generators, projection, double description, lift back, facet test and
/// reduction check, then classification. Classes are sorted with sort_classes.
std::vector<EquivalenceClass> generalize(const std::vector<ReductionSpec>& reductions, const Scenario& target,
                                         const std::vector<Relabeling>& symmetry,
                                         const GeneralizeOptions& options = {},
                                         std::vector<XiReport>* reports = nullptr);
/// Extra parties with the given setting counts appended after the lower parties.
std::vector<EquivalenceClass> generalize(const Inequality& lower, const std::vector<int>& extra_settings,
                                         const std::vector<Relabeling>& symmetry,
                                         const GeneralizeOptions& options = {},
                                         std::vector<XiReport>* reports = nullptr);

/// Full facet list of the local polytope, as inequalities sorted by coefficient vector.
std::vector<Inequality> local_polytope_facets(const Scenario& s, const DdOptions& options = {},
                                              DdStats* stats = nullptr);

}  // namespace bellcpt
