#include "bellcpt/io.hpp"

#include "bellcpt/errors.hpp"
#include "bellcpt/npa.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bellcpt {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t parse_count(const std::string& s, std::size_t line, std::size_t column) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected a non-negative integer, got '" + s + "'", line, column);
  return std::stoull(s);
}

}  // namespace

std::vector<ClassListEntry> to_class_list(const std::vector<EquivalenceClass>& classes) {
  std::vector<ClassListEntry> out;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const auto& c = classes[k];
    ClassListEntry e{k + 1, c.members_found, c.canonical, {}};
    if (auto sym = symmetric_notation(c.representative)) e.comments.push_back("symmetric: " + *sym);
    e.comments.push_back("representative: " + expression_string(c.representative));
    if (!c.witnesses.empty()) {
      std::string w;
      for (const auto& combo : c.witnesses) {
        if (!w.empty()) w += " | ";
        for (std::size_t i = 0; i < combo.size(); ++i) w += (i ? " / " : "") + to_string(combo[i]);
      }
      e.comments.push_back("xi: " + w);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string write_class_list(const std::vector<ClassListEntry>& entries) {
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += '\n';
    const auto& e = entries[i];
    out += "class " + std::to_string(e.index) + ": members=" + std::to_string(e.members) + "\n";
    out += write_inequality(e.inequality, e.comments);
  }
  return out;
}

std::vector<ClassListEntry> read_class_list(const std::string& text) {
  std::vector<ClassListEntry> out;
  std::istringstream in(text);
  std::string line;
  std::size_t ln = 0;

  std::optional<ClassListEntry> cur;
  std::string block;
  std::size_t block_start = 0;
  auto flush = [&] {
    if (!cur) return;
    cur->inequality = read_inequality(block, block_start);
    out.push_back(std::move(*cur));
    cur.reset();
    block.clear();
  };
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty()) {
      flush();
      continue;
    }
    if (!cur) {
      if (!t.starts_with("class ")) throw ParseError("expected 'class <k>: members=<count>'", ln, 1);
      const auto colon = t.find(':');
      const auto eq = t.find("members=");
      if (colon == std::string::npos || eq == std::string::npos || eq < colon)
        throw ParseError("expected 'class <k>: members=<count>'", ln, 1);
      ClassListEntry e;
      e.index = parse_count(trim(t.substr(6, colon - 6)), ln, 7);
      e.members = parse_count(trim(t.substr(eq + 8)), ln, eq + 9);
      cur = std::move(e);
      block_start = ln + 1;
      continue;
    }
    if (t[0] == '#' && block.empty()) {
      std::string c = t.substr(1);
      if (!c.empty() && c[0] == ' ') c.erase(0, 1);
      cur->comments.push_back(c);
      block_start = ln + 1;
      continue;
    }
    block += line + '\n';
  }
  flush();
  return out;
}

namespace {

json complex_vector(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v[i].real(), v[i].imag()});
  return a;
}

CVector read_complex_vector(const json& a) {
  CVector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = Complex(a[i].at(0).get<double>(), a[i].at(1).get<double>());
  return v;
}

json complex_matrix(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(r));
  }
  return rows;
}

CMatrix read_complex_matrix(const json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(r.size()) != n) throw ParseError("observable matrix is not square");
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = Complex(r[static_cast<std::size_t>(j)].at(0).get<double>(), r[static_cast<std::size_t>(j)].at(1).get<double>());
  }
  return m;
}

json seesaw_json(const SeesawRecord& r) {
  json obs = json::array();
  for (const auto& party : r.observables) {
    json p = json::array();
    for (const auto& x : party) p.push_back(complex_matrix(x));
    obs.push_back(std::move(p));
  }
  return {{"name", r.name},
          {"inequality", write_inequality(r.inequality)},
          {"local_dim", r.local_dim},
          {"restarts", r.restarts},
          {"seed", r.seed},
          {"value", r.value},
          {"converged", r.converged},
          {"best_restart", r.best_restart},
          {"state", complex_vector(r.state)},
          {"observables", std::move(obs)},
          {"trace", r.trace}};
}

SeesawRecord seesaw_from_json(const json& j) {
  SeesawRecord r;
  r.name = j.at("name").get<std::string>();
  r.inequality = read_inequality(j.at("inequality").get<std::string>());
  r.local_dim = j.at("local_dim").get<int>();
  r.restarts = j.at("restarts").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.value = j.at("value").get<double>();
  r.converged = j.at("converged").get<bool>();
  r.best_restart = j.at("best_restart").get<std::size_t>();
  r.state = read_complex_vector(j.at("state"));
  for (const auto& p : j.at("observables")) {
    std::vector<CMatrix> list;
    for (const auto& x : p) list.push_back(read_complex_matrix(x));
    r.observables.push_back(std::move(list));
  }
  r.trace = j.at("trace").get<std::vector<double>>();
  return r;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset only; map it to a line and column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("malformed JSON: ") + e.what(), line, col);
  }
}

template <class F>
auto with_json_errors(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string("unexpected JSON content: ") + e.what());
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string hex_hash(const Inequality& ineq) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(inequality_hash(ineq)));
  return buf;
}

}  // namespace

SeesawRecord SeesawRecord::of(std::string name, const Inequality& ineq, const SeesawConfig& cfg,
                              const SeesawResult& r) {
  SeesawRecord rec;
  rec.name = std::move(name);
  rec.inequality = ineq;
  rec.local_dim = cfg.local_dim;
  rec.restarts = cfg.restarts;
  rec.seed = cfg.seed;
  rec.value = r.value;
  rec.converged = r.converged;
  rec.best_restart = r.best_restart;
  rec.state = r.state;
  rec.observables = r.observables;
  rec.trace = r.traces.at(r.best_restart).values;
  return rec;
}

bool operator==(const SeesawRecord& x, const SeesawRecord& y) {
  if (x.name != y.name || !(x.inequality == y.inequality) || x.local_dim != y.local_dim || x.restarts != y.restarts ||
      x.seed != y.seed || x.value != y.value || x.converged != y.converged || x.best_restart != y.best_restart ||
      x.trace != y.trace)
    return false;
  if (x.state.size() != y.state.size() || x.state != y.state) return false;
  if (x.observables.size() != y.observables.size()) return false;
  for (std::size_t p = 0; p < x.observables.size(); ++p) {
    if (x.observables[p].size() != y.observables[p].size()) return false;
    for (std::size_t s = 0; s < x.observables[p].size(); ++s) {
      const auto& a = x.observables[p][s];
      const auto& b = y.observables[p][s];
      if (a.rows() != b.rows() || a.cols() != b.cols() || a != b) return false;
    }
  }
  return true;
}

std::string write_seesaw_record(const SeesawRecord& r) { return seesaw_json(r).dump(2) + "\n"; }

SeesawRecord read_seesaw_record(const std::string& text) {
  const json j = parse_json(text);
  return with_json_errors([&] { return seesaw_from_json(j); });
}

std::string write_npa_sidecar(const std::vector<NpaValue>& values) {
  json a = json::array();
  for (const auto& v : values)
    a.push_back({{"name", v.name},
                 {"hash", v.hash},
                 {"level2", optional_number(v.level2)},
                 {"level3", optional_number(v.level3)},
                 {"source", v.source}});
  return a.dump(2) + "\n";
}

std::vector<NpaValue> read_npa_sidecar(const std::string& text) {
  const json j = parse_json(text);
  return with_json_errors([&] {
    std::vector<NpaValue> out;
    for (const auto& e : j) {
      NpaValue v;
      v.name = e.value("name", "");
      v.hash = e.value("hash", "");
      v.level2 = read_optional(e, "level2");
      v.level3 = read_optional(e, "level3");
      v.source = e.value("source", "");
      out.push_back(std::move(v));
    }
    return out;
  });
}

std::optional<NpaValue> find_npa_value(const std::vector<NpaValue>& values, const std::string& name,
                                       const Inequality& ineq) {
  const std::string h = hex_hash(ineq);
  for (const auto& v : values)
    if (!v.hash.empty() && v.hash == h) return v;
  for (const auto& v : values)
    if (v.hash.empty() && !name.empty() && v.name == name) return v;
  return std::nullopt;
}

bool operator==(const ResultRecord& x, const ResultRecord& y) {
  const auto& a = x.bounds;
  const auto& b = y.bounds;
  return x.name == y.name && x.inequality == y.inequality && a.classical == b.classical && a.algebraic == b.algebraic &&
         a.qubit == b.qubit && a.qutrit == b.qutrit && a.npa2 == b.npa2 && a.npa3 == b.npa3 &&
         a.npa_source == b.npa_source && x.qubit_solution == y.qubit_solution;
}

std::string write_results(const std::vector<ResultRecord>& records) {
  json a = json::array();
  for (const auto& r : records) {
    const auto m = r.metrics();
    json j = {{"name", r.name},
              {"inequality", write_inequality(r.inequality)},
              {"classical", r.bounds.classical.get_str()},
              {"algebraic", r.bounds.algebraic.get_str()},
              {"qubit", optional_number(r.bounds.qubit)},
              {"qutrit", optional_number(r.bounds.qutrit)},
              {"npa2", optional_number(r.bounds.npa2)},
              {"npa3", optional_number(r.bounds.npa3)},
              {"npa_source", r.bounds.npa_source},
              {"metrics",
               {{"m_Q", optional_number(m.m_q)},
                {"m_32", optional_number(m.m_32)},
                {"m_N", optional_number(m.m_n)},
                {"m_N_level2", m.m_n_level2},
                {"m_A", m.m_a}}}};
    j["qubit_solution"] = r.qubit_solution ? seesaw_json(*r.qubit_solution) : json(nullptr);
    a.push_back(std::move(j));
  }
  return a.dump(2) + "\n";
}

std::vector<ResultRecord> read_results(const std::string& text) {
  const json j = parse_json(text);
  auto out = with_json_errors([&] {
    std::vector<ResultRecord> recs;
    for (const auto& e : j) {
      ResultRecord r;
      r.name = e.at("name").get<std::string>();
      r.inequality = read_inequality(e.at("inequality").get<std::string>());
      r.bounds.classical = BigInt(e.at("classical").get<std::string>());
      r.bounds.algebraic = BigInt(e.at("algebraic").get<std::string>());
      r.bounds.qubit = read_optional(e, "qubit");
      r.bounds.qutrit = read_optional(e, "qutrit");
      r.bounds.npa2 = read_optional(e, "npa2");
      r.bounds.npa3 = read_optional(e, "npa3");
      r.bounds.npa_source = e.value("npa_source", "");
      if (e.contains("qubit_solution") && !e.at("qubit_solution").is_null())
        r.qubit_solution = seesaw_from_json(e.at("qubit_solution"));
      recs.push_back(std::move(r));
    }
    return recs;
  });
  for (const auto& r : out) {
    if (r.bounds.classical != r.inequality.bound() || r.bounds.algebraic != algebraic_bound(r.inequality))
      throw InvariantError("result '" + r.name + "': stored bounds do not match the inequality");
    if (auto bad = ordering_violation(r.bounds)) throw InvariantError("result '" + r.name + "': " + *bad);
  }
  return out;
}

namespace {

std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

std::string write_report_csv(const std::vector<ResultRecord>& records) {
  std::string out = "name,bound,algebraic,qubit,qutrit,npa2,npa3,m_Q,m_32,m_N,m_A\n";
  for (const auto& r : records) {
    const auto m = r.metrics();
    out += csv_field(r.name) + "," + r.bounds.classical.get_str() + "," + r.bounds.algebraic.get_str() + "," +
           csv_number(r.bounds.qubit) + "," + csv_number(r.bounds.qutrit) + "," + csv_number(r.bounds.npa2) + "," +
           csv_number(r.bounds.npa3) + "," + csv_number(m.m_q) + "," + csv_number(m.m_32) + "," + csv_number(m.m_n) +
           "," + csv_number(m.m_a) + "\n";
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace bellcpt
