#pragma once

#include "bellcpt/exactlinalg.hpp"
#include "bellcpt/scenario.hpp"

#include <string>
#include <vector>

namespace bellcpt {

/// Local relabeling: observable X_{i,s} is replaced by sign[i][s-1] * X_{party_perm[i], setting_perm[i][s-1]}.
/// Settings are 1-based in the tables; setting 0 (identity) is always fixed.
struct Relabeling {
  std::vector<int> party_perm;
  std::vector<std::vector<int>> setting_perm;
  std::vector<std::vector<int>> sign;

  static Relabeling identity(const Scenario& s);
  /// Throws InvariantError unless the maps are bijections respecting setting counts.
  void validate(const Scenario& s) const;
  bool is_identity() const;

  friend bool operator==(const Relabeling&, const Relabeling&) = default;
};

/// Text form "perm:ABC->BAC; A:(1 2)(3 4); A1:-; B:-", where "B:-" flips every setting of B.
/// Errors carry the column of the offending token.
Relabeling parse_relabeling(const std::string& text, const Scenario& s);
/// Semicolon-separated list of generators, one per line in `text`; '#' starts a comment.
std::vector<Relabeling> parse_relabeling_list(const std::string& text, const Scenario& s);
std::string to_string(const Relabeling& r, const Scenario& s);

/// `first` applied, then `second`.
Relabeling compose(const Relabeling& first, const Relabeling& second);
Relabeling inverse(const Relabeling& r);

/// Signed permutation on the lifted coordinates: P[target][source] = sign.
IntMatrix relabeling_matrix(const Relabeling& r, const Scenario& s);

/// Signed permutation in compact form: image[i] = (target index, sign) for source index i.
struct SignedPermutation {
  std::vector<std::size_t> target;
  std::vector<int> sign;
};
SignedPermutation signed_permutation(const Relabeling& r, const Scenario& s);

/// P v for a lifted coefficient or behaviour vector.
IntVector apply(const Relabeling& r, const Scenario& s, std::span<const BigInt> v);
/// Image of a deterministic assignment (flattened letters).
std::vector<int> apply_to_assignment(const Relabeling& r, const Scenario& s, const std::vector<int>& assignment);

}  // namespace bellcpt
