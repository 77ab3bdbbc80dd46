#include "bellcpt/npa.hpp"

#include "bellcpt/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace bellcpt {

std::string Monomial::label() const {
  if (letters.empty()) return "1";
  std::string s;
  for (const auto& l : letters) s += letter_name(l.party, l.setting);
  return s;
}

std::strong_ordering operator<=>(const Monomial& x, const Monomial& y) {
  if (auto c = x.letters.size() <=> y.letters.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(x.letters.begin(), x.letters.end(), y.letters.begin(),
                                                y.letters.end());
}

Monomial canonical_monomial(const Scenario& s, std::vector<Letter> word) {
  for (const auto& l : word)
    if (l.party < 0 || l.party >= s.parties() || l.setting < 1 || l.setting > s.settings(l.party))
      throw InvariantError("monomial: letter (" + std::to_string(l.party) + ", " + std::to_string(l.setting) +
                           ") outside the scenario");
  std::stable_sort(word.begin(), word.end(), [](const Letter& a, const Letter& b) { return a.party < b.party; });
  Monomial m;
  for (const auto& l : word) {
    if (!m.letters.empty() && m.letters.back() == l)
      m.letters.pop_back();
    else
      m.letters.push_back(l);
  }
  return m;
}

Monomial adjoint(const Scenario& s, const Monomial& m) {
  return canonical_monomial(s, std::vector<Letter>(m.letters.rbegin(), m.letters.rend()));
}

namespace {

Monomial symmetric_key(const Scenario& s, const Monomial& m) {
  auto a = adjoint(s, m);
  return std::min(m, a);
}

}  // namespace

std::size_t MomentProblem::class_of(const Monomial& m) const {
  const auto key = symmetric_key(scenario, m);
  auto it = std::lower_bound(classes.begin(), classes.end(), key);
  if (it == classes.end() || *it != key)
    throw InvariantError("moment matrix level " + std::to_string(level) + " has no entry " + m.label());
  return static_cast<std::size_t>(it - classes.begin());
}

MomentProblem moment_matrix_structure(const Scenario& s, int level) {
  if (level < 1 || level > 3) throw InvariantError("npa: level must be 1, 2 or 3");
  MomentProblem p;
  p.scenario = s;
  p.level = level;

  std::set<Monomial> all{Monomial{}};
  std::vector<Monomial> frontier{Monomial{}};
  for (int k = 0; k < level; ++k) {
    std::vector<Monomial> next;
    for (const auto& m : frontier)
      for (int party = 0; party < s.parties(); ++party)
        for (int st = 1; st <= s.settings(party); ++st) {
          auto w = m.letters;
          w.push_back({party, st});
          auto c = canonical_monomial(s, std::move(w));
          if (c.length() == static_cast<std::size_t>(k + 1) && all.insert(c).second) next.push_back(c);
        }
    frontier = std::move(next);
  }
  p.monomials.assign(all.begin(), all.end());

  const std::size_t n = p.monomials.size();
  std::vector<std::vector<Monomial>> keys(n, std::vector<Monomial>(n));
  std::set<Monomial> cls;
  for (std::size_t u = 0; u < n; ++u) {
    const auto ud = adjoint(s, p.monomials[u]);
    for (std::size_t v = u; v < n; ++v) {
      auto w = ud.letters;
      w.insert(w.end(), p.monomials[v].letters.begin(), p.monomials[v].letters.end());
      keys[u][v] = symmetric_key(s, canonical_monomial(s, std::move(w)));
      cls.insert(keys[u][v]);
    }
  }
  p.classes.assign(cls.begin(), cls.end());
  p.entry_class.assign(n, std::vector<std::size_t>(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u; v < n; ++v) {
      const auto k = static_cast<std::size_t>(std::lower_bound(p.classes.begin(), p.classes.end(), keys[u][v]) -
                                              p.classes.begin());
      p.entry_class[u][v] = p.entry_class[v][u] = k;
    }
  return p;
}

Monomial correlator_monomial(const Scenario& s, std::size_t index) {
  const auto t = s.tuple_of(index);
  std::vector<Letter> w;
  for (int p = 0; p < s.parties(); ++p)
    if (t[static_cast<std::size_t>(p)] != 0) w.push_back({p, t[static_cast<std::size_t>(p)]});
  return canonical_monomial(s, std::move(w));
}

std::vector<BigInt> objective_weights(const MomentProblem& problem, const Inequality& ineq) {
  if (!(ineq.scenario() == problem.scenario)) throw InvariantError("npa: scenario mismatch");
  std::vector<BigInt> w(problem.classes.size());
  const auto& b = ineq.coefficients();
  for (std::size_t i = 1; i < b.size(); ++i)
    if (b[i] != 0) w[problem.class_of(correlator_monomial(problem.scenario, i))] -= b[i];
  return w;
}

std::uint64_t inequality_hash(const Inequality& ineq) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : write_inequality(ineq)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SdpaProblem npa_problem(const Inequality& ineq, int level) {
  const auto mp = moment_matrix_structure(ineq.scenario(), level);
  const auto w = objective_weights(mp, ineq);
  SdpaProblem p;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(inequality_hash(ineq)));
  p.comments.push_back(" bellcpt npa level=" + std::to_string(level) + " hash=" + hash + " " +
                       ineq.scenario().header());
  p.blocks.push_back(static_cast<long>(mp.size()));
  for (std::size_t k = 1; k < mp.classes.size(); ++k) p.objective.push_back(-w[k].get_d());

  const std::size_t n = mp.size();
  std::vector<std::vector<SdpaProblem::Entry>> by_class(mp.classes.size());
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u; v < n; ++v) {
      const std::size_t k = mp.entry_class[u][v];
      by_class[k].push_back({k, 1, u + 1, v + 1, k == 0 ? -1.0 : 1.0});
    }
  for (auto& list : by_class)
    for (auto& e : list) p.entries.push_back(e);
  return p;
}

std::string export_sdpa(const Inequality& ineq, int level) { return write_sdpa(npa_problem(ineq, level)); }

std::string export_sdpa_index(const Inequality& ineq, int level) {
  const auto mp = moment_matrix_structure(ineq.scenario(), level);
  std::string out;
  for (std::size_t k = 1; k < mp.classes.size(); ++k) out += std::to_string(k) + " " + mp.classes[k].label() + "\n";
  return out;
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  return s == "-0" ? "0" : s;
}

}  // namespace

std::string write_sdpa(const SdpaProblem& p) {
  std::string out;
  for (const auto& c : p.comments) out += "*" + c + "\n";
  out += std::to_string(p.objective.size()) + "\n";
  out += std::to_string(p.blocks.size()) + "\n";
  for (std::size_t i = 0; i < p.blocks.size(); ++i) out += (i ? " " : "") + std::to_string(p.blocks[i]);
  out += "\n";
  for (std::size_t i = 0; i < p.objective.size(); ++i) out += (i ? " " : "") + format_number(p.objective[i]);
  out += "\n";
  for (const auto& e : p.entries)
    out += std::to_string(e.matrix) + " " + std::to_string(e.block) + " " + std::to_string(e.row) + " " +
           std::to_string(e.col) + " " + format_number(e.value) + "\n";
  return out;
}

SdpaProblem parse_sdpa(const std::string& text) {
  SdpaProblem p;
  std::vector<std::pair<std::string, std::size_t>> tokens;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header && !line.empty() && (line[0] == '*' || line[0] == '"')) {
      p.comments.push_back(line.substr(1));
      continue;
    }
    header = false;
    if (auto eq = line.find('='); eq != std::string::npos) line.erase(eq);
    for (char& c : line)
      if (c == ',' || c == '{' || c == '}' || c == '(' || c == ')') c = ' ';
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.emplace_back(tok, lineno);
  }

  std::size_t pos = 0;
  auto need = [&](const char* what) -> const std::pair<std::string, std::size_t>& {
    if (pos >= tokens.size()) throw ParseError(std::string("sdpa: missing ") + what, lineno);
    return tokens[pos++];
  };
  auto as_long = [](const std::pair<std::string, std::size_t>& t, const char* what) {
    long v = 0;
    auto r = std::from_chars(t.first.data(), t.first.data() + t.first.size(), v);
    if (r.ec != std::errc() || r.ptr != t.first.data() + t.first.size())
      throw ParseError(std::string("sdpa: bad ") + what + " '" + t.first + "'", t.second);
    return v;
  };
  auto as_double = [](const std::pair<std::string, std::size_t>& t, const char* what) {
    double v = 0;
    auto r = std::from_chars(t.first.data(), t.first.data() + t.first.size(), v);
    if (r.ec != std::errc() || r.ptr != t.first.data() + t.first.size())
      throw ParseError(std::string("sdpa: bad ") + what + " '" + t.first + "'", t.second);
    return v;
  };

  const long m = as_long(need("variable count"), "variable count");
  const long nb = as_long(need("block count"), "block count");
  if (m < 0 || nb < 1) throw ParseError("sdpa: bad problem size", tokens.empty() ? 0 : tokens[0].second);
  for (long b = 0; b < nb; ++b) {
    const auto& t = need("block size");
    const long v = as_long(t, "block size");
    if (v == 0) throw ParseError("sdpa: zero block size", t.second);
    p.blocks.push_back(v);
  }
  for (long k = 0; k < m; ++k) p.objective.push_back(as_double(need("objective"), "objective"));
  while (pos < tokens.size()) {
    const std::size_t ln = tokens[pos].second;
    SdpaProblem::Entry e;
    const long k = as_long(need("matrix number"), "matrix number");
    const long b = as_long(need("block number"), "block number");
    const long i = as_long(need("row"), "row");
    const long j = as_long(need("column"), "column");
    e.value = as_double(need("value"), "value");
    if (k < 0 || k > m) throw ParseError("sdpa: matrix number out of range", ln);
    if (b < 1 || b > nb) throw ParseError("sdpa: block number out of range", ln);
    const long sz = std::abs(p.blocks[static_cast<std::size_t>(b - 1)]);
    if (i < 1 || j < 1 || i > sz || j > sz) throw ParseError("sdpa: entry outside its block", ln);
    e.matrix = static_cast<std::size_t>(k);
    e.block = static_cast<std::size_t>(b);
    e.row = static_cast<std::size_t>(i);
    e.col = static_cast<std::size_t>(j);
    p.entries.push_back(e);
  }
  return p;
}

}  // namespace bellcpt
