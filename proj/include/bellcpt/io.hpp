#pragma once

#include "bellcpt/inequality.hpp"
#include "bellcpt/quantum.hpp"
#include "bellcpt/search.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bellcpt {

/// One block of a class-list file:
///
///   class 3: members=576
///   # <comment>
///   scenario: n=2 settings=3,3
///   bound: 4
///   1,0: 1
///   ...
struct ClassListEntry {
  std::size_t index = 0;
  std::size_t members = 0;
  Inequality inequality;
  std::vector<std::string> comments;

  friend bool operator==(const ClassListEntry&, const ClassListEntry&) = default;
};

/// Canonical form per class. Comments carry the representative's symmetric and plain
/// renderings and the xi assignments that produced members.
std::vector<ClassListEntry> to_class_list(const std::vector<EquivalenceClass>& classes);
std::string write_class_list(const std::vector<ClassListEntry>& entries);
std::vector<ClassListEntry> read_class_list(const std::string& text);

/// Seesaw output for one inequality and dimension.
struct SeesawRecord {
  std::string name;
  Inequality inequality;
  int local_dim = 2;
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
  double value = 0;
  bool converged = false;
  std::size_t best_restart = 0;
  CVector state;
  Observables observables;
  /// Objective trace of the best restart.
  std::vector<double> trace;

  static SeesawRecord of(std::string name, const Inequality& ineq, const SeesawConfig& cfg, const SeesawResult& r);
  friend bool operator==(const SeesawRecord& x, const SeesawRecord& y);
};

std::string write_seesaw_record(const SeesawRecord& r);
SeesawRecord read_seesaw_record(const std::string& text);

/// Externally solved NPA values, matched to inequalities by name or hash.
struct NpaValue {
  std::string name;
  std::string hash;  ///< inequality_hash as 16 hex digits, may be empty
  std::optional<double> level2;
  std::optional<double> level3;
  std::string source;

  friend bool operator==(const NpaValue&, const NpaValue&) = default;
};

std::string write_npa_sidecar(const std::vector<NpaValue>& values);
std::vector<NpaValue> read_npa_sidecar(const std::string& text);
/// Entry whose hash matches, else whose name matches.
std::optional<NpaValue> find_npa_value(const std::vector<NpaValue>& values, const std::string& name,
                                       const Inequality& ineq);

struct ResultRecord {
  std::string name;
  Inequality inequality;
  BoundsRecord bounds;
  std::optional<SeesawRecord> qubit_solution;

  Metrics metrics() const { return bellcpt::metrics(bounds); }
  friend bool operator==(const ResultRecord& x, const ResultRecord& y);
};

std::string write_results(const std::vector<ResultRecord>& records);
/// Throws ParseError on malformed JSON and InvariantError when a record breaks the
/// bound ordering.
std::vector<ResultRecord> read_results(const std::string& text);

/// name,bound,algebraic,qubit,qutrit,npa2,npa3,m_Q,m_32,m_N,m_A
std::string write_report_csv(const std::vector<ResultRecord>& records);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace bellcpt
