#include "bellcpt/relabeling.hpp"

#include "bellcpt/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace bellcpt {

Relabeling Relabeling::identity(const Scenario& s) {
  Relabeling r;
  const auto n = static_cast<std::size_t>(s.parties());
  r.party_perm.resize(n);
  r.setting_perm.resize(n);
  r.sign.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.party_perm[i] = static_cast<int>(i);
    const int m = s.settings(static_cast<int>(i));
    for (int k = 1; k <= m; ++k) r.setting_perm[i].push_back(k);
    r.sign[i].assign(static_cast<std::size_t>(m), 1);
  }
  return r;
}

void Relabeling::validate(const Scenario& s) const {
  const auto n = static_cast<std::size_t>(s.parties());
  if (party_perm.size() != n || setting_perm.size() != n || sign.size() != n)
    throw InvariantError("relabeling: party count mismatch");
  std::vector<bool> hit(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const int t = party_perm[i];
    if (t < 0 || static_cast<std::size_t>(t) >= n || hit[static_cast<std::size_t>(t)])
      throw InvariantError("relabeling: party map is not a permutation");
    hit[static_cast<std::size_t>(t)] = true;
    if (s.settings(static_cast<int>(i)) != s.settings(t))
      throw InvariantError("relabeling: parties " + std::string(1, static_cast<char>('A' + i)) + " and " +
                           std::string(1, static_cast<char>('A' + t)) + " have different setting counts");
    const auto m = static_cast<std::size_t>(s.settings(static_cast<int>(i)));
    if (setting_perm[i].size() != m || sign[i].size() != m) throw InvariantError("relabeling: setting count mismatch");
    std::vector<bool> seen(m + 1, false);
    for (std::size_t k = 0; k < m; ++k) {
      const int v = setting_perm[i][k];
      if (v < 1 || static_cast<std::size_t>(v) > m || seen[static_cast<std::size_t>(v)])
        throw InvariantError("relabeling: setting map is not a permutation");
      seen[static_cast<std::size_t>(v)] = true;
      if (sign[i][k] != 1 && sign[i][k] != -1) throw InvariantError("relabeling: signs must be +-1");
    }
  }
}

bool Relabeling::is_identity() const {
  for (std::size_t i = 0; i < party_perm.size(); ++i) {
    if (party_perm[i] != static_cast<int>(i)) return false;
    for (std::size_t k = 0; k < setting_perm[i].size(); ++k)
      if (setting_perm[i][k] != static_cast<int>(k + 1) || sign[i][k] != 1) return false;
  }
  return true;
}

namespace {

struct Lexer {
  const std::string& s;
  std::size_t line;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what, std::size_t at) const { throw ParseError(what, line, at + 1); }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  int party(const Scenario& sc) {
    skip();
    if (pos >= s.size() || !std::isupper(static_cast<unsigned char>(s[pos]))) fail("expected a party letter", pos);
    const int p = s[pos] - 'A';
    if (p >= sc.parties()) fail(std::string("party ") + s[pos] + " is not in the scenario", pos);
    ++pos;
    return p;
  }
  int number() {
    skip();
    const std::size_t b = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (b == pos) fail("expected a setting number", b);
    return std::stoi(s.substr(b, pos - b));
  }
  void expect(char c) {
    skip();
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'", pos);
    ++pos;
  }
  bool peek(char c) {
    skip();
    return pos < s.size() && s[pos] == c;
  }
};

Relabeling parse_at(const std::string& text, const Scenario& sc, std::size_t line) {
  Relabeling r = Relabeling::identity(sc);
  Lexer lx{text, line};
  lx.skip();
  if (lx.pos >= text.size() || text.compare(lx.pos, 2, "id") == 0) {
    if (lx.pos < text.size()) lx.pos += 2;
    lx.skip();
    if (lx.pos < text.size()) lx.fail("unexpected text after 'id'", lx.pos);
    return r;
  }
  while (true) {
    lx.skip();
    if (lx.pos >= text.size()) break;
    const std::size_t start = lx.pos;
    if (text.compare(lx.pos, 5, "perm:") == 0) {
      lx.pos += 5;
      std::vector<int> from, to;
      while (!lx.peek('-')) from.push_back(lx.party(sc));
      lx.expect('-');
      lx.expect('>');
      while (lx.pos < text.size() && !lx.peek(';') && lx.pos < text.size()) {
        lx.skip();
        if (lx.pos >= text.size()) break;
        to.push_back(lx.party(sc));
      }
      if (from.size() != to.size() || from.empty()) lx.fail("party permutation lists differ in length", start);
      std::vector<int> map(static_cast<std::size_t>(sc.parties()), -1);
      std::vector<bool> hit(static_cast<std::size_t>(sc.parties()), false);
      for (std::size_t k = 0; k < from.size(); ++k) {
        if (map[static_cast<std::size_t>(from[k])] != -1) lx.fail("party repeated in permutation", start);
        if (hit[static_cast<std::size_t>(to[k])]) lx.fail("party repeated in permutation", start);
        map[static_cast<std::size_t>(from[k])] = to[k];
        hit[static_cast<std::size_t>(to[k])] = true;
      }
      for (int p = 0; p < sc.parties(); ++p) {
        if (map[static_cast<std::size_t>(p)] == -1) {
          if (hit[static_cast<std::size_t>(p)]) lx.fail("party permutation is not a bijection", start);
          map[static_cast<std::size_t>(p)] = p;
        }
      }
      for (int p = 0; p < sc.parties(); ++p)
        if (sc.settings(p) != sc.settings(map[static_cast<std::size_t>(p)]))
          lx.fail("party permutation mixes parties with different setting counts", start);
      r.party_perm = map;
    } else {
      const int p = lx.party(sc);
      const auto pi = static_cast<std::size_t>(p);
      if (lx.pos < text.size() && std::isdigit(static_cast<unsigned char>(text[lx.pos]))) {
        const std::size_t at = lx.pos;
        const int st = lx.number();
        if (st < 1 || st > sc.settings(p)) lx.fail("setting out of range", at);
        lx.expect(':');
        lx.expect('-');
        r.sign[pi][static_cast<std::size_t>(st - 1)] *= -1;
      } else {
        lx.expect(':');
        if (lx.peek('-')) {
          ++lx.pos;
          for (auto& x : r.sign[pi]) x *= -1;
        } else {
          std::vector<int> perm = r.setting_perm[pi];
          std::vector<int> cycle_map(perm.size());
          for (std::size_t k = 0; k < perm.size(); ++k) cycle_map[k] = static_cast<int>(k + 1);
          std::vector<bool> used(perm.size() + 1, false);
          if (!lx.peek('(')) lx.fail("expected '(' or '-'", lx.pos);
          while (lx.peek('(')) {
            ++lx.pos;
            std::vector<int> cyc;
            while (!lx.peek(')')) {
              const std::size_t at = lx.pos;
              const int v = lx.number();
              if (v < 1 || v > sc.settings(p)) lx.fail("setting out of range", at);
              if (used[static_cast<std::size_t>(v)]) lx.fail("setting repeated in cycles", at);
              used[static_cast<std::size_t>(v)] = true;
              cyc.push_back(v);
            }
            ++lx.pos;
            for (std::size_t k = 0; k < cyc.size(); ++k)
              cycle_map[static_cast<std::size_t>(cyc[k] - 1)] = cyc[(k + 1) % cyc.size()];
          }
          // Cycles compose after any earlier setting map of the same party.
          for (auto& x : perm) x = cycle_map[static_cast<std::size_t>(x - 1)];
          r.setting_perm[pi] = perm;
        }
      }
    }
    lx.skip();
    if (lx.pos >= text.size()) break;
    lx.expect(';');
  }
  return r;
}

}  // namespace

Relabeling parse_relabeling(const std::string& text, const Scenario& s) { return parse_at(text, s, 1); }

std::vector<Relabeling> parse_relabeling_list(const std::string& text, const Scenario& s) {
  std::vector<Relabeling> out;
  std::istringstream in(text);
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    out.push_back(parse_at(line, s, ln));
  }
  return out;
}

std::string to_string(const Relabeling& r, const Scenario& s) {
  std::vector<std::string> parts;
  const int n = s.parties();
  bool moved = false;
  std::string from, to;
  for (int p = 0; p < n; ++p) {
    from += static_cast<char>('A' + p);
    to += static_cast<char>('A' + r.party_perm[static_cast<std::size_t>(p)]);
    moved = moved || r.party_perm[static_cast<std::size_t>(p)] != p;
  }
  if (moved) parts.push_back("perm:" + from + "->" + to);
  for (int p = 0; p < n; ++p) {
    const auto& perm = r.setting_perm[static_cast<std::size_t>(p)];
    std::vector<bool> done(perm.size() + 1, false);
    std::string cycles;
    for (std::size_t k = 1; k <= perm.size(); ++k) {
      if (done[k] || perm[k - 1] == static_cast<int>(k)) continue;
      cycles += '(';
      std::size_t j = k;
      bool first = true;
      while (!done[j]) {
        done[j] = true;
        cycles += (first ? "" : " ") + std::to_string(j);
        first = false;
        j = static_cast<std::size_t>(perm[j - 1]);
      }
      cycles += ')';
    }
    if (!cycles.empty()) parts.push_back(std::string(1, static_cast<char>('A' + p)) + ":" + cycles);
  }
  for (int p = 0; p < n; ++p)
    for (std::size_t k = 0; k < r.sign[static_cast<std::size_t>(p)].size(); ++k)
      if (r.sign[static_cast<std::size_t>(p)][k] < 0) parts.push_back(letter_name(p, static_cast<int>(k + 1)) + ":-");
  if (parts.empty()) return "id";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : "") + parts[i];
  return out;
}

Relabeling compose(const Relabeling& first, const Relabeling& second) {
  Relabeling r = first;
  for (std::size_t i = 0; i < first.party_perm.size(); ++i) {
    const auto mid = static_cast<std::size_t>(first.party_perm[i]);
    r.party_perm[i] = second.party_perm[mid];
    for (std::size_t k = 0; k < first.setting_perm[i].size(); ++k) {
      const auto ms = static_cast<std::size_t>(first.setting_perm[i][k] - 1);
      r.setting_perm[i][k] = second.setting_perm[mid][ms];
      r.sign[i][k] = first.sign[i][k] * second.sign[mid][ms];
    }
  }
  return r;
}

Relabeling inverse(const Relabeling& r) {
  Relabeling inv = r;
  for (std::size_t i = 0; i < r.party_perm.size(); ++i) {
    const auto t = static_cast<std::size_t>(r.party_perm[i]);
    inv.party_perm[t] = static_cast<int>(i);
    for (std::size_t k = 0; k < r.setting_perm[i].size(); ++k) {
      const auto ts = static_cast<std::size_t>(r.setting_perm[i][k] - 1);
      inv.setting_perm[t][ts] = static_cast<int>(k + 1);
      inv.sign[t][ts] = r.sign[i][k];
    }
  }
  return inv;
}

SignedPermutation signed_permutation(const Relabeling& r, const Scenario& s) {
  r.validate(s);
  const std::size_t dim = s.lifted_dimension();
  const int n = s.parties();
  SignedPermutation out;
  out.target.resize(dim);
  out.sign.resize(dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const auto t = s.tuple_of(idx);
    CorrelatorIndex dst(static_cast<std::size_t>(n), 0);
    int sg = 1;
    for (int i = 0; i < n; ++i) {
      const int st = t[static_cast<std::size_t>(i)];
      if (st == 0) continue;
      const auto ii = static_cast<std::size_t>(i);
      dst[static_cast<std::size_t>(r.party_perm[ii])] = r.setting_perm[ii][static_cast<std::size_t>(st - 1)];
      sg *= r.sign[ii][static_cast<std::size_t>(st - 1)];
    }
    out.target[idx] = s.index_of(dst);
    out.sign[idx] = sg;
  }
  return out;
}

IntMatrix relabeling_matrix(const Relabeling& r, const Scenario& s) {
  const auto sp = signed_permutation(r, s);
  IntMatrix p(s.lifted_dimension(), s.lifted_dimension());
  for (std::size_t i = 0; i < sp.target.size(); ++i) p(sp.target[i], i) = sp.sign[i];
  return p;
}

IntVector apply(const Relabeling& r, const Scenario& s, std::span<const BigInt> v) {
  if (v.size() != s.lifted_dimension()) throw InvariantError("apply: vector length mismatch");
  const auto sp = signed_permutation(r, s);
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[sp.target[i]] = sp.sign[i] > 0 ? v[i] : BigInt(-v[i]);
  return out;
}

std::vector<int> apply_to_assignment(const Relabeling& r, const Scenario& s, const std::vector<int>& a) {
  r.validate(s);
  if (static_cast<int>(a.size()) != s.letters()) throw InvariantError("apply_to_assignment: length mismatch");
  std::vector<int> out(a.size());
  for (int i = 0; i < s.parties(); ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const int t = r.party_perm[ii];
    for (int k = 1; k <= s.settings(i); ++k) {
      const auto kk = static_cast<std::size_t>(k - 1);
      out[static_cast<std::size_t>(s.letter_offset(t) + r.setting_perm[ii][kk] - 1)] =
          r.sign[ii][kk] * a[static_cast<std::size_t>(s.letter_offset(i) + k - 1)];
    }
  }
  return out;
}

}  // namespace bellcpt
