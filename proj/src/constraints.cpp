#include "bellcpt/constraints.hpp"

#include "bellcpt/cone.hpp"
#include "bellcpt/errors.hpp"

#include <algorithm>

namespace bellcpt {

std::string to_string(const XiAssignment& xi) {
  std::string s;
  for (std::size_t p = 0; p < xi.values.size(); ++p) {
    if (p) s += ' ';
    for (int v : xi.values[p]) s += v > 0 ? '+' : '-';
  }
  return s.empty() ? "()" : s;
}

Embedding Embedding::leading(int lower_parties) {
  Embedding e;
  for (int i = 0; i < lower_parties; ++i) e.party_map.push_back(i);
  return e;
}

std::vector<int> Embedding::extra_parties(const Scenario& target) const {
  std::vector<bool> hit(static_cast<std::size_t>(target.parties()), false);
  for (int p : party_map) {
    if (p < 0 || p >= target.parties() || hit[static_cast<std::size_t>(p)])
      throw InvariantError("embedding: party map is not injective into the target");
    hit[static_cast<std::size_t>(p)] = true;
  }
  std::vector<int> out;
  for (int p = 0; p < target.parties(); ++p)
    if (!hit[static_cast<std::size_t>(p)]) out.push_back(p);
  return out;
}

std::vector<XiAssignment> enumerate_xi(const Scenario& target, const Embedding& embedding) {
  const auto extra = embedding.extra_parties(target);
  int bits = 0;
  for (int p : extra) bits += target.settings(p);
  if (bits > 30) throw ResourceCapError("enumerate_xi: 2^" + std::to_string(bits) + " assignments");
  std::vector<XiAssignment> out;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << bits); ++k) {
    XiAssignment xi;
    int bit = bits - 1;
    for (int p : extra) {
      std::vector<int> v;
      for (int s = 0; s < target.settings(p); ++s, --bit) v.push_back(((k >> bit) & 1U) ? 1 : -1);
      xi.values.push_back(std::move(v));
    }
    out.push_back(std::move(xi));
  }
  return out;
}

std::vector<Vertex> build_extended_behaviors(const Inequality& lower, const XiAssignment& xi, const Scenario& target,
                                             const Embedding& embedding) {
  const Scenario& ls = lower.scenario();
  if (static_cast<int>(embedding.party_map.size()) != ls.parties())
    throw InvariantError("extended behaviours: embedding does not cover the lower scenario");
  const auto extra = embedding.extra_parties(target);
  for (int j = 0; j < ls.parties(); ++j)
    if (ls.settings(j) != target.settings(embedding.party_map[static_cast<std::size_t>(j)]))
      throw InvariantError("extended behaviours: setting counts of embedded parties differ");
  if (xi.values.size() != extra.size()) throw InvariantError("extended behaviours: xi has the wrong number of parties");
  for (std::size_t k = 0; k < extra.size(); ++k) {
    if (static_cast<int>(xi.values[k].size()) != target.settings(extra[k]))
      throw InvariantError("extended behaviours: xi length does not match the setting count of party " +
                           std::string(1, static_cast<char>('A' + extra[k])));
    for (int v : xi.values[k])
      if (v != 1 && v != -1) throw InvariantError("extended behaviours: xi entries must be +-1");
  }

  const auto lv = enumerate_vertices(ls);
  const Cone lc = lift_polytope(lv);
  const auto cert = is_facet(lower.cone_normal(), lc);
  if (!cert.facet()) throw InvariantError("extended behaviours: the lower inequality is not facet-defining");

  std::vector<Vertex> out;
  for (auto i : cert.saturating) {
    const auto& g = lv[i].assignment;
    std::vector<int> a(static_cast<std::size_t>(target.letters()));
    for (int j = 0; j < ls.parties(); ++j) {
      const int t = embedding.party_map[static_cast<std::size_t>(j)];
      for (int s = 0; s < ls.settings(j); ++s)
        a[static_cast<std::size_t>(target.letter_offset(t) + s)] = g[static_cast<std::size_t>(ls.letter_offset(j) + s)];
    }
    for (std::size_t k = 0; k < extra.size(); ++k)
      for (int s = 0; s < target.settings(extra[k]); ++s)
        a[static_cast<std::size_t>(target.letter_offset(extra[k]) + s)] = xi.values[k][static_cast<std::size_t>(s)];
    auto coords = lifted_coordinates(target, a);
    out.push_back(Vertex{std::move(a), std::move(coords)});
  }
  return out;
}

std::vector<Vertex> build_extended_behaviors(const Inequality& lower, const XiAssignment& xi, const Scenario& target) {
  if (target.parties() < lower.scenario().parties())
    throw InvariantError("extended behaviours: target has fewer parties than the lower scenario");
  return build_extended_behaviors(lower, xi, target, Embedding::leading(lower.scenario().parties()));
}

const char* to_string(RowKind k) {
  switch (k) {
    case RowKind::Saturation: return "saturation";
    case RowKind::Symmetry: return "symmetry";
    case RowKind::Custom: return "custom";
  }
  return "?";
}

void ConstraintSystem::add_row(std::span<const BigInt> row, RowKind kind) {
  g_.append_row(row);
  tags_.push_back(kind);
}

void ConstraintSystem::append(const ConstraintSystem& other) {
  if (other.cols() != cols()) throw InvariantError("constraint system: width mismatch");
  for (std::size_t r = 0; r < other.rows(); ++r) add_row(other.matrix().row(r), other.tags()[r]);
}

ConstraintSystem saturation_rows(const std::vector<Vertex>& extended) {
  if (extended.empty()) return ConstraintSystem(0);
  ConstraintSystem cs(extended.front().coords.size());
  for (const auto& v : extended) {
    if (v.coords.size() != cs.cols()) throw InvariantError("saturation rows: mixed dimensions");
    IntVector row;
    row.reserve(v.coords.size());
    for (int x : v.coords) row.emplace_back(x);
    cs.add_row(row, RowKind::Saturation);
  }
  return cs;
}

ConstraintSystem symmetry_rows(const std::vector<Relabeling>& generators, const Scenario& scenario) {
  const std::size_t d = scenario.lifted_dimension();
  ConstraintSystem cs(d);
  for (const auto& g : generators) {
    const auto sp = signed_permutation(g, scenario);
    // Row t of I - P: e_t - sign * e_source for the source mapped onto t.
    for (std::size_t src = 0; src < d; ++src) {
      const std::size_t t = sp.target[src];
      if (t == src && sp.sign[src] == 1) continue;
      IntVector row(d);
      row[t] += 1;
      row[src] -= sp.sign[src];
      cs.add_row(row, RowKind::Symmetry);
    }
  }
  return cs;
}

ConstraintSystem custom_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  ConstraintSystem cs(cols);
  for (const auto& r : rows) cs.add_row(r, RowKind::Custom);
  return cs;
}

}  // namespace bellcpt
