#include "bellcpt/inequality.hpp"

#include "bellcpt/cone.hpp"
#include "bellcpt/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace bellcpt {

Inequality::Inequality(Scenario scenario, IntVector b) : scenario_(std::move(scenario)), b_(std::move(b)) {
  if (b_.size() != scenario_.lifted_dimension())
    throw InvariantError("inequality: coefficient vector has length " + std::to_string(b_.size()) + ", expected " +
                         std::to_string(scenario_.lifted_dimension()));
  b_ = primitive_normalize(std::move(b_), SignConvention::Keep);
}

Inequality Inequality::from_cone_normal(Scenario scenario, const IntVector& normal) {
  IntVector b(normal.size());
  for (std::size_t i = 0; i < normal.size(); ++i) b[i] = -normal[i];
  return Inequality(std::move(scenario), std::move(b));
}

Inequality Inequality::from_expression(Scenario scenario, const IntVector& expression, const BigInt& bound) {
  IntVector b(expression.size());
  for (std::size_t i = 1; i < expression.size(); ++i) b[i] = -expression[i];
  if (!b.empty()) b[0] = bound;
  return Inequality(std::move(scenario), std::move(b));
}

IntVector Inequality::cone_normal() const {
  IntVector n(b_.size());
  for (std::size_t i = 0; i < b_.size(); ++i) n[i] = -b_[i];
  return n;
}

std::size_t Inequality::term_count() const {
  return static_cast<std::size_t>(std::count_if(b_.begin() + 1, b_.end(), [](const BigInt& x) { return x != 0; }));
}

BigInt Inequality::evaluate(std::span<const int> lifted) const {
  if (lifted.size() != b_.size()) throw InvariantError("evaluate: length mismatch");
  BigInt acc = 0;
  for (std::size_t i = 1; i < b_.size(); ++i)
    if (lifted[i] != 0) acc -= b_[i] * lifted[i];
  return acc;
}

BigInt Inequality::evaluate(std::span<const BigInt> lifted) const {
  if (lifted.size() != b_.size()) throw InvariantError("evaluate: length mismatch");
  BigInt acc = 0;
  for (std::size_t i = 1; i < b_.size(); ++i) acc -= b_[i] * lifted[i];
  return acc;
}

BigInt classical_maximum(const Inequality& ineq) {
  const auto vertices = enumerate_vertices(ineq.scenario());
  BigInt best = ineq.evaluate(vertices.front().coords);
  for (const auto& v : vertices) best = std::max(best, ineq.evaluate(v.coords));
  return best;
}

bool is_valid_bell_inequality(const Inequality& ineq) { return classical_maximum(ineq) == ineq.bound(); }

bool is_facet_inequality(const Inequality& ineq) {
  const Cone c = lift_polytope(enumerate_vertices(ineq.scenario()));
  return is_facet(ineq.cone_normal(), c).facet();
}

bool is_trivial(const Inequality& ineq) {
  const Scenario& s = ineq.scenario();
  const auto& b = ineq.coefficients();
  if (b[0] != 1) return false;
  // The support must be exactly the 2^n sub-tuples of one full tuple.
  std::size_t top = 0;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] != 0) top = i;
  const CorrelatorIndex full = s.tuple_of(top);
  if (std::any_of(full.begin(), full.end(), [](int x) { return x == 0; })) return false;
  const int n = s.parties();
  std::vector<int> sigma(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    CorrelatorIndex t(static_cast<std::size_t>(n), 0);
    t[static_cast<std::size_t>(i)] = full[static_cast<std::size_t>(i)];
    const BigInt& x = b[s.index_of(t)];
    if (x != 1 && x != -1) return false;
    sigma[static_cast<std::size_t>(i)] = x.get_si();
  }
  std::size_t support = 0;
  for (std::size_t idx = 0; idx < b.size(); ++idx) {
    const CorrelatorIndex t = s.tuple_of(idx);
    bool sub = true;
    int expect = 1;
    for (int i = 0; i < n; ++i) {
      const int ti = t[static_cast<std::size_t>(i)];
      if (ti == 0) continue;
      if (ti != full[static_cast<std::size_t>(i)]) sub = false;
      expect *= sigma[static_cast<std::size_t>(i)];
    }
    if (!sub) {
      if (b[idx] != 0) return false;
      continue;
    }
    if (b[idx] != expect) return false;
    ++support;
  }
  return support == (std::size_t{1} << n);
}

namespace {

std::string tuple_string(const CorrelatorIndex& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t[i]);
  }
  return s;
}

std::string trim(std::string_view v) {
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
  return std::string(v);
}

BigInt parse_bigint(std::string_view text, std::size_t line, std::size_t column) {
  const std::string t = trim(text);
  bool ok = !t.empty();
  for (std::size_t i = 0; i < t.size() && ok; ++i)
    ok = std::isdigit(static_cast<unsigned char>(t[i])) || (i == 0 && t.size() > 1 && (t[i] == '-' || t[i] == '+'));
  if (!ok) throw ParseError("expected integer, got '" + t + "'", line, column);
  return BigInt(t[0] == '+' ? t.substr(1) : t);
}

}  // namespace

std::string write_inequality(const Inequality& ineq, const std::vector<std::string>& comments) {
  std::ostringstream os;
  for (const auto& c : comments) os << "# " << c << '\n';
  const Scenario& s = ineq.scenario();
  os << s.header() << '\n';
  os << "bound: " << ineq.bound().get_str() << '\n';
  const auto& b = ineq.coefficients();
  for (std::size_t i = 1; i < b.size(); ++i)
    if (b[i] != 0) os << tuple_string(s.tuple_of(i)) << ": " << BigInt(-b[i]).get_str() << '\n';
  return os.str();
}

Inequality read_inequality(const std::string& text, std::size_t first_line) {
  std::istringstream in(text);
  std::string line;
  std::size_t ln = first_line - 1;
  std::optional<Scenario> scenario;
  std::optional<BigInt> bound;
  IntVector expr;
  std::vector<bool> seen;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!scenario) {
      try {
        scenario = Scenario::parse_header(t);
      } catch (const ParseError& e) {
        throw ParseError(e.message(), ln, e.column());
      }
      expr.assign(scenario->lifted_dimension(), 0);
      seen.assign(scenario->lifted_dimension(), false);
      continue;
    }
    if (!bound) {
      if (!t.starts_with("bound:")) throw ParseError("expected 'bound: <int>'", ln, 1);
      bound = parse_bigint(std::string_view(t).substr(6), ln, 7);
      continue;
    }
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw ParseError("expected '<s_1>,...,<s_n>: <int>'", ln, 1);
    CorrelatorIndex tuple;
    std::string_view idx = std::string_view(t).substr(0, colon);
    std::size_t col = 1;
    while (true) {
      const auto comma = idx.find(',');
      const std::string part = trim(idx.substr(0, comma));
      int v = -1;
      auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (part.empty() || ec != std::errc() || p != part.data() + part.size())
        throw ParseError("bad setting index '" + part + "'", ln, col);
      tuple.push_back(v);
      if (comma == std::string_view::npos) break;
      col += comma + 1;
      idx.remove_prefix(comma + 1);
    }
    if (static_cast<int>(tuple.size()) != scenario->parties())
      throw ParseError("index has " + std::to_string(tuple.size()) + " entries, scenario has " +
                           std::to_string(scenario->parties()) + " parties",
                       ln, 1);
    for (int i = 0; i < scenario->parties(); ++i)
      if (tuple[static_cast<std::size_t>(i)] < 0 || tuple[static_cast<std::size_t>(i)] > scenario->settings(i))
        throw ParseError("setting index out of range", ln, 1);
    const std::size_t k = scenario->index_of(tuple);
    if (k == 0) throw ParseError("the constant term belongs on the 'bound:' line", ln, 1);
    if (seen[k]) throw ParseError("duplicate index " + tuple_string(tuple), ln, 1);
    seen[k] = true;
    expr[k] = parse_bigint(std::string_view(t).substr(colon + 1), ln, colon + 2);
  }
  if (!scenario) throw ParseError("missing scenario header", ln ? ln : first_line, 1);
  if (!bound) throw ParseError("missing 'bound:' line", ln, 1);
  try {
    return Inequality::from_expression(*scenario, expr, *bound);
  } catch (const DegenerateInputError&) {
    throw ParseError("inequality has no nonzero coefficient", first_line, 1);
  }
}

std::vector<Inequality> read_inequalities(const std::string& text) {
  std::vector<Inequality> out;
  std::istringstream in(text);
  std::string line;
  std::string block;
  std::size_t ln = 0;
  std::size_t start = 1;
  bool has_content = false;
  auto flush = [&] {
    if (has_content) out.push_back(read_inequality(block, start));
    block.clear();
    has_content = false;
  };
  while (std::getline(in, line)) {
    ++ln;
    const std::string t = trim(line);
    if (t.empty()) {
      flush();
      start = ln + 1;
      continue;
    }
    if (t.starts_with("class ")) {
      block += '\n';
      continue;
    }
    if (t[0] != '#') has_content = true;
    block += line + '\n';
  }
  flush();
  return out;
}

namespace {

bool party_symmetric(const Inequality& ineq) {
  const Scenario& s = ineq.scenario();
  const auto& set = s.settings();
  if (!std::all_of(set.begin(), set.end(), [&](int m) { return m == set.front(); })) return false;
  const auto& b = ineq.coefficients();
  for (std::size_t i = 0; i < b.size(); ++i) {
    CorrelatorIndex t = s.tuple_of(i);
    std::sort(t.begin(), t.end());
    do {
      if (b[s.index_of(t)] != b[i]) return false;
    } while (std::next_permutation(t.begin(), t.end()));
  }
  return true;
}

void append_term(std::string& out, const BigInt& c, const std::string& body, bool space_after_coeff) {
  const bool first = out.empty();
  if (c < 0) out += first ? "-" : " - ";
  else if (!first) out += " + ";
  const BigInt a = abs(c);
  if (a != 1) out += a.get_str() + (space_after_coeff ? " " : "");
  out += body;
}

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  std::size_t line = 1;

  void skip() {
    while (pos < s.size()) {
      const unsigned char c = static_cast<unsigned char>(s[pos]);
      if (std::isspace(c)) {
        ++pos;
      } else if (s.compare(pos, 3, "\xE2\x9F\xA8") == 0 || s.compare(pos, 3, "\xE2\x9F\xA9") == 0) {
        pos += 3;  // angle brackets
      } else {
        break;
      }
    }
  }
  bool done() {
    skip();
    return pos >= s.size();
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line, pos + 1); }
  bool at_relation() {
    skip();
    return s.compare(pos, 2, "<=") == 0 || s.compare(pos, 3, "\xE2\x89\xA4") == 0;
  }
  void relation() {
    if (s.compare(pos, 2, "<=") == 0) pos += 2;
    else if (s.compare(pos, 3, "\xE2\x89\xA4") == 0) pos += 3;
    else fail("expected '<='");
  }
  std::optional<BigInt> integer() {
    skip();
    std::size_t e = pos;
    while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) ++e;
    if (e == pos) return std::nullopt;
    BigInt v(s.substr(pos, e - pos));
    pos = e;
    return v;
  }
  int sign() {
    skip();
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) return s[pos++] == '-' ? -1 : 1;
    return 0;
  }
};

BigInt parse_rhs(Cursor& cur) {
  cur.relation();
  const int sg = cur.sign();
  auto v = cur.integer();
  if (!v) cur.fail("expected an integer bound after '<='");
  if (!cur.done()) cur.fail("unexpected text after the bound");
  return sg < 0 ? BigInt(-*v) : *v;
}

}  // namespace

std::optional<std::string> symmetric_notation(const Inequality& ineq) {
  if (!party_symmetric(ineq)) return std::nullopt;
  const Scenario& s = ineq.scenario();
  const auto& b = ineq.coefficients();
  std::map<std::string, BigInt> terms;
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (b[i] == 0) continue;
    CorrelatorIndex t = s.tuple_of(i);
    std::sort(t.begin(), t.end(), std::greater<>());
    std::string key;
    for (int x : t) key += static_cast<char>('0' + x);
    terms.emplace(key, -b[i]);
  }
  if (s.settings(0) > 9) return std::nullopt;
  std::string out;
  for (const auto& [key, c] : terms) append_term(out, c, "(" + key + ")", false);
  if (out.empty()) out = "0";
  return out + " <= " + ineq.bound().get_str();
}

Inequality parse_symmetric(const Scenario& scenario, const std::string& text) {
  const int n = scenario.parties();
  for (int i = 1; i < n; ++i)
    if (scenario.settings(i) != scenario.settings(0))
      throw InvariantError("symmetric notation needs equal setting counts");
  Cursor cur{text};
  IntVector expr(scenario.lifted_dimension());
  bool any = false;
  while (!cur.at_relation()) {
    if (cur.done()) cur.fail("expected '<=' and a bound");
    int sg = cur.sign();
    if (sg == 0 && any) cur.fail("expected '+' or '-' between terms");
    if (sg == 0) sg = 1;
    auto coeff = cur.integer().value_or(BigInt(1));
    cur.skip();
    if (cur.pos >= text.size() || text[cur.pos] != '(') cur.fail("expected '('");
    ++cur.pos;
    CorrelatorIndex t;
    while (cur.pos < text.size() && std::isdigit(static_cast<unsigned char>(text[cur.pos]))) {
      const int d = text[cur.pos] - '0';
      if (d > scenario.settings(0)) cur.fail("setting digit out of range");
      t.push_back(d);
      ++cur.pos;
    }
    if (cur.pos >= text.size() || text[cur.pos] != ')') cur.fail("expected ')'");
    if (static_cast<int>(t.size()) != n) cur.fail("term needs " + std::to_string(n) + " digits");
    if (std::all_of(t.begin(), t.end(), [](int x) { return x == 0; })) cur.fail("constant term in expression");
    ++cur.pos;
    std::sort(t.begin(), t.end());
    do {
      expr[scenario.index_of(t)] += sg * coeff;
    } while (std::next_permutation(t.begin(), t.end()));
    any = true;
  }
  const BigInt bound = parse_rhs(cur);
  try {
    return Inequality::from_expression(scenario, expr, bound);
  } catch (const DegenerateInputError&) {
    throw ParseError("inequality has no nonzero coefficient", 1, 1);
  }
}

std::string expression_string(const Inequality& ineq) {
  const Scenario& s = ineq.scenario();
  const auto& b = ineq.coefficients();
  std::string out;
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (b[i] == 0) continue;
    const auto t = s.tuple_of(i);
    std::string body;
    for (int p = 0; p < s.parties(); ++p)
      if (t[static_cast<std::size_t>(p)]) body += letter_name(p, t[static_cast<std::size_t>(p)]);
    append_term(out, -b[i], body, true);
  }
  if (out.empty()) out = "0";
  return out + " <= " + ineq.bound().get_str();
}

Inequality parse_expression(const Scenario& scenario, const std::string& text) {
  Cursor cur{text};
  IntVector expr(scenario.lifted_dimension());
  bool any = false;
  const int n = scenario.parties();
  while (!cur.at_relation()) {
    if (cur.done()) cur.fail("expected '<=' and a bound");
    int sg = cur.sign();
    if (sg == 0 && any) cur.fail("expected '+' or '-' between terms");
    if (sg == 0) sg = 1;
    auto coeff = cur.integer().value_or(BigInt(1));
    cur.skip();
    if (cur.pos < text.size() && text[cur.pos] == '*') {
      ++cur.pos;
      cur.skip();
    }
    bool bracket = false;
    if (cur.pos < text.size() && text[cur.pos] == '<' && text.compare(cur.pos, 2, "<=") != 0) {
      bracket = true;
      ++cur.pos;
    }
    CorrelatorIndex t(static_cast<std::size_t>(n), 0);
    bool letter = false;
    while (true) {
      cur.skip();
      if (letter && cur.pos < text.size() && text[cur.pos] == '*') {
        ++cur.pos;
        cur.skip();
      }
      if (cur.pos >= text.size() || !std::isupper(static_cast<unsigned char>(text[cur.pos]))) break;
      const int p = text[cur.pos] - 'A';
      if (p >= n) cur.fail(std::string("party ") + text[cur.pos] + " is not in the scenario");
      ++cur.pos;
      std::size_t e = cur.pos;
      while (e < text.size() && std::isdigit(static_cast<unsigned char>(text[e]))) ++e;
      if (e == cur.pos) cur.fail("expected a setting number");
      const int st = std::stoi(text.substr(cur.pos, e - cur.pos));
      if (st < 1 || st > scenario.settings(p)) cur.fail("setting out of range");
      if (t[static_cast<std::size_t>(p)] != 0) cur.fail("party appears twice in one term");
      t[static_cast<std::size_t>(p)] = st;
      cur.pos = e;
      letter = true;
    }
    if (bracket) {
      if (cur.pos >= text.size() || text[cur.pos] != '>') cur.fail("expected '>'");
      ++cur.pos;
    }
    if (!letter) cur.fail("expected an observable such as A1 or A1B2");
    expr[scenario.index_of(t)] += sg * coeff;
    any = true;
  }
  const BigInt bound = parse_rhs(cur);
  try {
    return Inequality::from_expression(scenario, expr, bound);
  } catch (const DegenerateInputError&) {
    throw ParseError("inequality has no nonzero coefficient", 1, 1);
  }
}

Substitution Substitution::identity(const Scenario& source) {
  Substitution sub;
  sub.target = source;
  sub.letters.resize(static_cast<std::size_t>(source.parties()));
  for (int p = 0; p < source.parties(); ++p)
    for (int s = 1; s <= source.settings(p); ++s)
      sub.letters[static_cast<std::size_t>(p)].push_back(Substitution::Target{false, 1, p, s});
  return sub;
}

IntVector substitute(const Inequality& ineq, const Substitution& sub) {
  const Scenario& s = ineq.scenario();
  const int n = s.parties();
  if (static_cast<int>(sub.letters.size()) != n) throw InvariantError("substitute: party count mismatch");
  std::vector<std::vector<bool>> used(static_cast<std::size_t>(sub.target.parties()));
  for (int q = 0; q < sub.target.parties(); ++q) used[static_cast<std::size_t>(q)].assign(static_cast<std::size_t>(sub.target.settings(q)) + 1, false);
  std::vector<int> party_of(static_cast<std::size_t>(n), -1);
  for (int p = 0; p < n; ++p) {
    const auto& row = sub.letters[static_cast<std::size_t>(p)];
    if (static_cast<int>(row.size()) != s.settings(p)) throw InvariantError("substitute: setting count mismatch");
    for (const auto& t : row) {
      if (t.value != 1 && t.value != -1) throw InvariantError("substitute: values must be +-1");
      if (t.constant) continue;
      if (t.party < 0 || t.party >= sub.target.parties() || t.setting < 1 || t.setting > sub.target.settings(t.party))
        throw InvariantError("substitute: target letter out of range");
      if (party_of[static_cast<std::size_t>(p)] != -1 && party_of[static_cast<std::size_t>(p)] != t.party)
        throw InvariantError("substitute: letters of one party must stay within one party");
      party_of[static_cast<std::size_t>(p)] = t.party;
      auto u = used[static_cast<std::size_t>(t.party)][static_cast<std::size_t>(t.setting)];
      if (u) throw InvariantError("substitute: two letters renamed to the same target");
      u = true;
    }
  }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      if (party_of[static_cast<std::size_t>(p)] != -1 && party_of[static_cast<std::size_t>(p)] == party_of[static_cast<std::size_t>(q)])
        throw InvariantError("substitute: two parties renamed onto one");

  IntVector out(sub.target.lifted_dimension());
  const auto& b = ineq.coefficients();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0) continue;
    const auto t = s.tuple_of(i);
    CorrelatorIndex dst(static_cast<std::size_t>(sub.target.parties()), 0);
    int sign = 1;
    for (int p = 0; p < n; ++p) {
      const int st = t[static_cast<std::size_t>(p)];
      if (st == 0) continue;
      const auto& tg = sub.letters[static_cast<std::size_t>(p)][static_cast<std::size_t>(st - 1)];
      sign *= tg.value;
      if (!tg.constant) dst[static_cast<std::size_t>(tg.party)] = tg.setting;
    }
    out[sub.target.index_of(dst)] += sign * b[i];
  }
  return out;
}

Inequality lift_settings(const Inequality& ineq, const std::vector<int>& settings) {
  const Scenario& s = ineq.scenario();
  if (static_cast<int>(settings.size()) != s.parties()) throw InvariantError("lift_settings: party count mismatch");
  for (int p = 0; p < s.parties(); ++p)
    if (settings[static_cast<std::size_t>(p)] < s.settings(p)) throw InvariantError("lift_settings: cannot remove settings");
  Substitution sub = Substitution::identity(s);
  sub.target = Scenario(settings);
  return Inequality(sub.target, substitute(ineq, sub));
}

bool is_positive_multiple(std::span<const BigInt> b, std::span<const BigInt> reference) {
  if (b.size() != reference.size()) return false;
  // b = (p/q) ref with p/q > 0  <=>  b_i ref_j == b_j ref_i for all i,j and signs agree.
  std::size_t pivot = reference.size();
  for (std::size_t i = 0; i < reference.size(); ++i)
    if (reference[i] != 0) {
      pivot = i;
      break;
    }
  if (pivot == reference.size()) return false;
  if (sgn(b[pivot]) != sgn(reference[pivot]) || b[pivot] == 0) return false;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] * reference[pivot] != reference[i] * b[pivot]) return false;
  return true;
}

}  // namespace bellcpt
