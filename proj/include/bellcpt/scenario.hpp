#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bellcpt {

/// Tuple (s_1, ..., s_n) with 0 <= s_i <= m_i; setting 0 is the identity measurement.
using CorrelatorIndex = std::vector<int>;

/// Bell scenario with dichotomic measurements: n parties, m_i settings for party i.
///
/// Correlator coordinates are addressed by a row-major linear index over setting
/// tuples (party 0 most significant). Index 0 is the all-zero tuple, i.e. the
/// constant coordinate of the lifted space.
class Scenario {
public:
  Scenario() = default;
  explicit Scenario(std::vector<int> settings);

  int parties() const noexcept { return static_cast<int>(settings_.size()); }
  int settings(int party) const { return settings_.at(static_cast<std::size_t>(party)); }
  const std::vector<int>& settings() const noexcept { return settings_; }
  /// Total number of (party, setting) letters, i.e. sum of m_i.
  int letters() const noexcept { return letters_; }
  /// Offset of party p's first letter in the flattened assignment layout.
  int letter_offset(int party) const { return offsets_.at(static_cast<std::size_t>(party)); }

  /// Behaviour-space dimension prod (m_i + 1) - 1.
  std::size_t dimension() const noexcept { return lifted_dimension_ - 1; }
  std::size_t lifted_dimension() const noexcept { return lifted_dimension_; }
  /// 2^(sum m_i).
  std::uint64_t vertex_count() const;

  std::size_t stride(int party) const { return strides_.at(static_cast<std::size_t>(party)); }
  std::size_t index_of(const CorrelatorIndex& tuple) const;
  CorrelatorIndex tuple_of(std::size_t index) const;
  /// Number of parties with a nonzero setting in the tuple at `index`.
  int weight(std::size_t index) const;

  /// "scenario: n=<n> settings=<m_1>,<m_2>,..."
  std::string header() const;
  /// Inverse of header(); also accepts the bare "n=.. settings=.." form.
  static Scenario parse_header(const std::string& line);

  friend bool operator==(const Scenario&, const Scenario&) = default;

private:
  std::vector<int> settings_;
  std::vector<int> offsets_;
  std::vector<std::size_t> strides_;
  std::size_t lifted_dimension_ = 1;
  int letters_ = 0;
};

std::size_t behavior_dimension(const Scenario& s);
std::uint64_t vertex_count(const Scenario& s);

/// Local deterministic behaviour in lifted correlator coordinates.
struct Vertex {
  std::vector<int> assignment;  ///< per letter (flattened by party), values in {-1, +1}
  std::vector<int> coords;      ///< length D+1, coords[0] == 1

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Coordinates of the behaviour produced by a deterministic assignment.
std::vector<int> lifted_coordinates(const Scenario& s, const std::vector<int>& assignment);

inline constexpr std::uint64_t kDefaultVertexCap = std::uint64_t{1} << 24;

/// All 2^(sum m_i) deterministic vertices, lexicographic over assignments with -1
/// before +1 (first letter most significant). Throws ResourceCapError above `cap`.
std::vector<Vertex> enumerate_vertices(const Scenario& s, std::uint64_t cap = kDefaultVertexCap);

/// Letter label such as "A1" or "C4" (party letters A, B, C, ...).
std::string letter_name(int party, int setting);

}  // namespace bellcpt
