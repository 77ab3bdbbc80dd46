#pragma once

#include "bellcpt/exactlinalg.hpp"
#include "bellcpt/inequality.hpp"
#include "bellcpt/relabeling.hpp"
#include "bellcpt/scenario.hpp"

#include <string>
#include <vector>

namespace bellcpt {

/// Deterministic outcomes for the parties a reduction leaves out, one vector per
/// party in target-party order (xi_0 = +1 is implicit).
struct XiAssignment {
  std::vector<std::vector<int>> values;

  friend bool operator==(const XiAssignment&, const XiAssignment&) = default;
  friend auto operator<=>(const XiAssignment&, const XiAssignment&) = default;
};
std::string to_string(const XiAssignment& xi);

/// Where the parties of a lower inequality sit inside the target scenario. Party j of
/// the lower scenario becomes target party `party_map[j]`; setting counts must agree.
/// The remaining target parties receive xi.
struct Embedding {
  std::vector<int> party_map;

  /// Lower parties first, extra parties appended.
  static Embedding leading(int lower_parties);
  /// Target parties not hit by party_map, ascending.
  std::vector<int> extra_parties(const Scenario& target) const;
};

/// All xi in {-1,+1}^(settings of the extra parties), lexicographic with -1 first.
std::vector<XiAssignment> enumerate_xi(const Scenario& target, const Embedding& embedding);

/// One target vertex per lower vertex saturating `lower`, with the extra parties set to xi.
/// Throws InvariantError if `lower` is not facet-defining or the shapes disagree.
std::vector<Vertex> build_extended_behaviors(const Inequality& lower, const XiAssignment& xi, const Scenario& target,
                                             const Embedding& embedding);
/// Extra parties appended after the lower parties.
std::vector<Vertex> build_extended_behaviors(const Inequality& lower, const XiAssignment& xi, const Scenario& target);

enum class RowKind { Saturation, Symmetry, Custom };
const char* to_string(RowKind k);

/// Rows of G with provenance. Any normal b_C with G b_C = 0 satisfies every constraint.
class ConstraintSystem {
public:
  explicit ConstraintSystem(std::size_t cols = 0) : g_(0, cols) {}

  std::size_t cols() const noexcept { return g_.cols(); }
  std::size_t rows() const noexcept { return g_.rows(); }
  const IntMatrix& matrix() const noexcept { return g_; }
  const std::vector<RowKind>& tags() const noexcept { return tags_; }

  void add_row(std::span<const BigInt> row, RowKind kind);
  void append(const ConstraintSystem& other);

private:
  IntMatrix g_;
  std::vector<RowKind> tags_;
};

/// Row (1, g) per extended behaviour.
ConstraintSystem saturation_rows(const std::vector<Vertex>& extended);
/// Nonzero rows of I - P for every generator.
ConstraintSystem symmetry_rows(const std::vector<Relabeling>& generators, const Scenario& scenario);
/// Expert rows with explicit g_0.
ConstraintSystem custom_rows(const std::vector<IntVector>& rows, std::size_t cols);

}  // namespace bellcpt
