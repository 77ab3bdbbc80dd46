#include "bellcpt/errors.hpp"
#include "bellcpt/fixtures.hpp"
#include "bellcpt/io.hpp"
#include "bellcpt/npa.hpp"
#include "bellcpt/quantum.hpp"
#include "bellcpt/search.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <set>

using namespace bellcpt;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitCap = 3;
constexpr int kExitInvariant = 4;

std::vector<Inequality> load_inequalities(const std::string& ref) {
  if (ref.starts_with("fixture:")) return {fixture(ref.substr(8))};
  auto v = read_inequalities(read_file(ref));
  if (v.empty()) throw ParseError(ref + ": no inequality found");
  return v;
}

Inequality load_inequality(const std::string& ref) {
  auto v = load_inequalities(ref);
  if (v.size() != 1) throw InvariantError(ref + ": expected one inequality, found " + std::to_string(v.size()));
  return v.front();
}

std::string display_name(const std::string& ref, const std::string& given) {
  if (!given.empty()) return given;
  if (ref.starts_with("fixture:")) return ref.substr(8);
  return std::filesystem::path(ref).stem().string();
}

std::vector<Relabeling> load_symmetry(const std::vector<std::string>& refs, const std::vector<std::string>& inline_gens,
                                      const Scenario& s) {
  std::vector<Relabeling> out;
  for (const auto& ref : refs) {
    auto part = ref.starts_with("fixture:") ? fixture_symmetry(ref.substr(8), s) : parse_relabeling_list(read_file(ref), s);
    out.insert(out.end(), part.begin(), part.end());
  }
  for (const auto& g : inline_gens) out.push_back(parse_relabeling(g, s));
  return out;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file(path, content);
}

void print_classes(const std::vector<EquivalenceClass>& classes) {
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const auto& c = classes[k];
    std::printf("class %zu: members=%zu bound=%s terms=%zu\n", k + 1, c.members_found,
                c.canonical.bound().get_str().c_str(), simplicity(c));
  }
}

struct Common {
  std::size_t threads = 1;
  bool quiet = false;
};

struct FacetsCmd {
  std::vector<int> settings;
  std::string output;
  std::size_t max_rays = 5'000'000;

  int run(const Common&) const {
    const Scenario s(settings);
    const auto t0 = std::chrono::steady_clock::now();
    DdOptions dd;
    dd.max_rays = max_rays;
    const auto facets = local_polytope_facets(s, dd);
    auto classes = classify(facets);
    sort_classes(classes);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::size_t trivial = 0;
    for (const auto& f : facets) trivial += is_trivial(f) ? 1 : 0;
    std::printf("%zu facets, %zu classes (%zu non-trivial + %zu trivial) in %.2f s\n", facets.size(), classes.size(),
                facets.size() - trivial, trivial, sec);
    print_classes(classes);
    if (!output.empty()) write_file(output, write_class_list(to_class_list(classes)));
    return 0;
  }
};

struct GeneralizeCmd {
  std::vector<std::string> lower;
  std::vector<std::string> embed;
  std::vector<int> extra_settings;
  std::vector<int> target_settings;
  std::vector<std::string> symmetry_files;
  std::vector<std::string> generators;
  std::string output;
  std::size_t max_rays = 5'000'000;
  std::size_t max_nodes = 10'000'000;
  bool keep_trivial = false;

  int run(const Common& common) const {
    std::vector<ReductionSpec> specs;
    for (const auto& ref : lower) specs.push_back({load_inequality(ref), {}});
    Scenario target;
    if (!target_settings.empty()) {
      target = Scenario(target_settings);
    } else {
      auto st = specs.front().lower.scenario().settings();
      st.insert(st.end(), extra_settings.begin(), extra_settings.end());
      target = Scenario(st);
    }
    if (!embed.empty() && embed.size() != specs.size())
      throw InvariantError("--embed must be given once per --lower");
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (embed.empty()) {
        specs[i].embedding = Embedding::leading(specs[i].lower.scenario().parties());
        continue;
      }
      std::vector<int> map;
      std::size_t pos = 0;
      const auto& e = embed[i];
      while (pos <= e.size()) {
        const auto comma = e.find(',', pos);
        const auto tok = e.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.size() == 1 && tok[0] >= 'A' && tok[0] <= 'Z')
          map.push_back(tok[0] - 'A');
        else
          map.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      specs[i].embedding.party_map = std::move(map);
    }
    const auto sym = load_symmetry(symmetry_files, generators, target);

    GeneralizeOptions opt;
    opt.dd.max_rays = max_rays;
    opt.group.max_nodes = max_nodes;
    opt.threads = common.threads;
    opt.keep_trivial = keep_trivial;
    if (!common.quiet)
      opt.progress = [](const XiReport& r) {
        std::string xi;
        for (std::size_t i = 0; i < r.xi.size(); ++i) xi += (i ? " / " : "") + to_string(r.xi[i]);
        std::fprintf(stderr, "xi %zu/%zu [%s] kernel=%zu rays=%zu candidates=%zu facets=%zu reduced=%zu %.2fs\n",
                     r.index + 1, r.total, xi.c_str(), r.kernel_dim, r.projected_rays, r.candidates, r.facets,
                     r.reduced, r.seconds);
      };
    const auto t0 = std::chrono::steady_clock::now();
    const auto classes = generalize(specs, target, sym, opt);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%zu classes in %.2f s\n", classes.size(), sec);
    print_classes(classes);
    if (!output.empty()) write_file(output, write_class_list(to_class_list(classes)));
    return 0;
  }
};

struct ClassifyCmd {
  std::string input;
  std::string output;
  std::size_t max_nodes = 10'000'000;

  int run(const Common&) const {
    const auto ineqs = load_inequalities(input);
    GroupSpec g;
    g.max_nodes = max_nodes;
    auto classes = classify(ineqs, g);
    sort_classes(classes);
    std::printf("%zu inequalities, %zu classes\n", ineqs.size(), classes.size());
    print_classes(classes);
    if (!output.empty()) write_file(output, write_class_list(to_class_list(classes)));
    return 0;
  }
};

struct SeesawCmd {
  std::string input;
  std::string name;
  std::string output;
  SeesawConfig cfg;

  int run(const Common& common) const {
    const auto ineq = load_inequality(input);
    SeesawConfig c = cfg;
    c.threads = common.threads;
    const auto r = seesaw(ineq, c);
    std::printf("%s d=%d value=%.9f bound=%s converged=%s restart=%zu\n", display_name(input, name).c_str(),
                c.local_dim, r.value, ineq.bound().get_str().c_str(), r.converged ? "yes" : "no", r.best_restart);
    if (!output.empty()) write_file(output, write_seesaw_record(SeesawRecord::of(display_name(input, name), ineq, c, r)));
    return 0;
  }
};

struct MetricsCmd {
  std::string input;
  std::string name;
  std::string results;
  std::string qubit_file;
  std::string qutrit_file;
  std::optional<double> qubit;
  std::optional<double> qutrit;
  std::optional<double> npa2;
  std::optional<double> npa3;
  std::string npa_file;
  std::string output;

  std::vector<ResultRecord> gather() const {
    std::vector<ResultRecord> recs;
    if (!results.empty()) recs = read_results(read_file(results));
    if (!input.empty()) {
      ResultRecord r;
      r.inequality = load_inequality(input);
      r.name = display_name(input, name);
      r.bounds = BoundsRecord::of(r.inequality);
      recs.push_back(std::move(r));
    }
    if (recs.empty()) throw InvariantError("metrics: give --ineq or --results");
    std::vector<NpaValue> side;
    if (!npa_file.empty()) side = read_npa_sidecar(read_file(npa_file));
    for (auto& r : recs) {
      if (!side.empty())
        if (auto v = find_npa_value(side, r.name, r.inequality)) {
          r.bounds.npa2 = v->level2;
          r.bounds.npa3 = v->level3;
          r.bounds.npa_source = v->source;
        }
    }
    if (!input.empty()) {
      auto& r = recs.back();
      auto take = [&](const std::string& file, int dim, std::optional<double>& slot) {
        if (file.empty()) return;
        auto s = read_seesaw_record(read_file(file));
        if (!(s.inequality == r.inequality)) throw InvariantError(file + ": seesaw record is for another inequality");
        if (s.local_dim != dim) throw InvariantError(file + ": wrong local dimension");
        slot = s.value;
        if (dim == 2) r.qubit_solution = std::move(s);
      };
      take(qubit_file, 2, r.bounds.qubit);
      take(qutrit_file, 3, r.bounds.qutrit);
      if (qubit) r.bounds.qubit = qubit;
      if (qutrit) r.bounds.qutrit = qutrit;
      if (npa2) r.bounds.npa2 = npa2;
      if (npa3) r.bounds.npa3 = npa3;
      if ((npa2 || npa3) && r.bounds.npa_source.empty()) r.bounds.npa_source = "command line";
    }
    for (const auto& r : recs)
      if (auto bad = ordering_violation(r.bounds)) throw InvariantError(r.name + ": " + *bad);
    return recs;
  }

  int run(const Common&) const {
    const auto recs = gather();
    auto pct = [](const std::optional<double>& v) {
      if (!v) return std::string("n/a");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", *v);
      return std::string(buf);
    };
    for (const auto& r : recs) {
      const auto m = r.metrics();
      std::printf("%s: m_Q=%s m_32=%s m_N=%s%s m_A=%.2f\n", r.name.c_str(), pct(m.m_q).c_str(), pct(m.m_32).c_str(),
                  pct(m.m_n).c_str(), m.m_n_level2 ? " (level 2)" : "", m.m_a);
    }
    if (!output.empty()) write_file(output, write_results(recs));
    return 0;
  }
};

struct NpaExportCmd {
  std::string input;
  int level = 2;
  std::string output;
  std::string index;

  int run(const Common&) const {
    const auto ineq = load_inequality(input);
    const auto text = export_sdpa(ineq, level);
    emit(output, text);
    std::string idx = index;
    if (idx.empty() && !output.empty() && output != "-") idx = output + ".index";
    if (!idx.empty()) write_file(idx, export_sdpa_index(ineq, level));
    if (!output.empty() && output != "-") {
      const auto p = npa_problem(ineq, level);
      std::fprintf(stderr, "level %d: block %ld, %zu variables, hash %s\n", level, p.blocks.front(), p.variables(),
                   p.comments.front().c_str());
    }
    return 0;
  }
};

struct ReportCmd {
  std::vector<std::string> results;
  std::string output;

  int run(const Common&) const {
    std::vector<ResultRecord> all;
    for (const auto& f : results) {
      auto r = read_results(read_file(f));
      all.insert(all.end(), r.begin(), r.end());
    }
    emit(output, write_report_csv(all));
    return 0;
  }
};

struct FixturesCmd {
  std::string dump_dir;

  int run(const Common&) const {
    if (!dump_dir.empty()) std::filesystem::create_directories(dump_dir);
    for (const auto& n : fixture_names()) {
      const auto f = fixture(n);
      if (dump_dir.empty()) {
        std::printf("%-16s %-24s %s\n", n.c_str(), f.scenario().header().c_str(), expression_string(f).c_str());
        continue;
      }
      std::vector<std::string> comments{n};
      if (auto sym = symmetric_notation(f)) comments.push_back("symmetric: " + *sym);
      comments.push_back(expression_string(f));
      write_file((std::filesystem::path(dump_dir) / (n + ".ineq")).string(), write_inequality(f, comments));
    }
    if (dump_dir.empty())
      for (const auto& n : fixture_symmetry_names()) std::printf("symmetry %s\n", n.c_str());
    return 0;
  }
};

struct OrbitCmd {
  std::string input;
  std::string dir;
  std::vector<std::string> parties;

  int run(const Common&) const {
    const auto ineq = load_inequality(input);
    const Scenario& s = ineq.scenario();
    std::vector<int> moved;
    if (parties.empty())
      for (int p = 0; p < s.parties(); ++p) moved.push_back(p);
    for (const auto& name : parties) {
      const int p = name.size() == 1 && std::isalpha(static_cast<unsigned char>(name[0])) ? std::toupper(name[0]) - 'A'
                                                                                          : std::stoi(name);
      if (p < 0 || p >= s.parties()) throw InvariantError("no party " + name + " in " + s.header());
      moved.push_back(p);
    }
    // setting permutations and outcome flips of the chosen parties, one party at a time
    std::set<IntVector> seen{ineq.coefficients()};
    for (int p : moved) {
      const std::vector<IntVector> frontier(seen.begin(), seen.end());
      std::vector<int> perm(static_cast<std::size_t>(s.settings(p)));
      std::iota(perm.begin(), perm.end(), 1);
      do {
        for (unsigned m = 0; m < (1U << perm.size()); ++m) {
          auto r = Relabeling::identity(s);
          r.setting_perm[static_cast<std::size_t>(p)] = perm;
          for (std::size_t k = 0; k < perm.size(); ++k) r.sign[static_cast<std::size_t>(p)][k] = (m >> k & 1U) ? -1 : 1;
          for (const auto& v : frontier) seen.insert(apply(r, s, v));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    std::filesystem::create_directories(dir);
    std::size_t k = 0;
    for (const auto& v : seen) {
      const Inequality q(s, v);
      write_file((std::filesystem::path(dir) / (std::to_string(++k) + ".ineq")).string(),
                 write_inequality(q, {expression_string(q)}));
    }
    std::printf("%zu inequalities in %s\n", seen.size(), dir.c_str());
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell inequality facet search, classification and quantum bounds"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file (flags given on the command line win)");
  bool show_config = false;
  app.add_flag("--show-config", show_config, "Print the effective configuration with defaults and exit");
  Common common;
  app.add_option("-j,--threads", common.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", common.quiet, "No progress output");

  FacetsCmd facets;
  auto* fc = app.add_subcommand("facets", "Enumerate and classify all facets of a local polytope");
  fc->add_option("-s,--settings", facets.settings, "Settings per party, e.g. 2,2,2")->required()->delimiter(',');
  fc->add_option("-o,--output", facets.output, "Class-list file");
  fc->add_option("--max-rays", facets.max_rays, "Double description ray cap")->capture_default_str();

  GeneralizeCmd gen;
  auto* gc = app.add_subcommand("generalize", "Facets of a larger scenario that reduce to a given inequality");
  gc->add_option("-l,--lower", gen.lower, "Inequality file or fixture:<name>; repeat for several reductions")->required();
  gc->add_option("--embed", gen.embed, "Target parties of each lower inequality, e.g. A,B or 0,2");
  gc->add_option("-e,--extra-settings", gen.extra_settings, "Settings of the appended parties")->delimiter(',');
  gc->add_option("-t,--target-settings", gen.target_settings, "Settings of the target scenario")->delimiter(',');
  gc->add_option("-y,--symmetry", gen.symmetry_files, "Generator file or fixture:<name>");
  gc->add_option("-g,--generator", gen.generators, "Inline generator such as \"perm:ABC->BAC\"");
  gc->add_option("-o,--output", gen.output, "Class-list file");
  gc->add_option("--max-rays", gen.max_rays, "Double description ray cap")->capture_default_str();
  gc->add_option("--max-nodes", gen.max_nodes, "Canonical-form search node cap")->capture_default_str();
  gc->add_flag("--keep-trivial", gen.keep_trivial, "Keep positivity facets");

  ClassifyCmd cls;
  auto* cc = app.add_subcommand("classify", "Group inequalities into relabeling classes");
  cc->add_option("input", cls.input, "File of inequality blocks")->required();
  cc->add_option("-o,--output", cls.output, "Class-list file");
  cc->add_option("--max-nodes", cls.max_nodes, "Canonical-form search node cap")->capture_default_str();

  SeesawCmd ss;
  auto* sc = app.add_subcommand("seesaw", "Lower bound on the quantum value at fixed local dimension");
  sc->add_option("input", ss.input, "Inequality file or fixture:<name>")->required();
  sc->add_option("--name", ss.name, "Name stored in the output");
  sc->add_option("-d,--dim", ss.cfg.local_dim, "Local dimension")->capture_default_str()->check(CLI::Range(1, 4));
  sc->add_option("-r,--restarts", ss.cfg.restarts, "Random starts")->capture_default_str();
  sc->add_option("--warmup", ss.cfg.warmup, "Sweeps before the survivor cut")->capture_default_str();
  sc->add_option("--survivors", ss.cfg.survivors, "Starts refined to convergence")->capture_default_str();
  sc->add_option("--tol", ss.cfg.tolerance, "Per-sweep improvement threshold")->capture_default_str();
  sc->add_option("--max-iter", ss.cfg.max_iterations, "Sweep limit per start")->capture_default_str();
  sc->add_option("--seed", ss.cfg.seed, "PRNG seed")->capture_default_str();
  sc->add_option("-o,--output", ss.output, "Seesaw JSON file");

  MetricsCmd mc;
  auto* mcc = app.add_subcommand("metrics", "Violation ratios from classical, quantum and NPA values");
  mcc->add_option("-i,--ineq", mc.input, "Inequality file or fixture:<name>");
  mcc->add_option("--name", mc.name, "Record name");
  mcc->add_option("--results", mc.results, "Existing results JSON to update");
  mcc->add_option("--qubit-file", mc.qubit_file, "Seesaw JSON for d=2");
  mcc->add_option("--qutrit-file", mc.qutrit_file, "Seesaw JSON for d=3");
  mcc->add_option("--qubit", mc.qubit, "Qubit value");
  mcc->add_option("--qutrit", mc.qutrit, "Qutrit value");
  mcc->add_option("--npa2", mc.npa2, "Level-2 NPA value");
  mcc->add_option("--npa3", mc.npa3, "Level-3 NPA value");
  mcc->add_option("--npa", mc.npa_file, "NPA sidecar JSON");
  mcc->add_option("-o,--output", mc.output, "Results JSON");

  NpaExportCmd nc;
  auto* ncc = app.add_subcommand("npa-export", "Write an NPA relaxation in sparse SDPA format");
  ncc->add_option("input", nc.input, "Inequality file or fixture:<name>")->required();
  ncc->add_option("-L,--level", nc.level, "Hierarchy level")->capture_default_str()->check(CLI::Range(1, 3));
  ncc->add_option("-o,--output", nc.output, "SDPA file (stdout when omitted)");
  ncc->add_option("--index", nc.index, "Variable index file (default <output>.index)");

  ReportCmd rc;
  auto* rcc = app.add_subcommand("report", "CSV of bounds and ratios for plotting");
  rcc->add_option("results", rc.results, "Results JSON files")->required();
  rcc->add_option("-o,--output", rc.output, "CSV file (stdout when omitted)");

  FixturesCmd fx;
  auto* fxc = app.add_subcommand("fixtures", "List built-in inequalities and symmetry sets");
  fxc->add_option("--dump", fx.dump_dir, "Write every fixture as <dir>/<name>.ineq");

  OrbitCmd oc;
  auto* occ = app.add_subcommand("orbit", "Every distinct relabeled form of an inequality, one file each");
  occ->add_option("input", oc.input, "Inequality file or fixture:<name>")->required();
  occ->add_option("-o,--output-dir", oc.dir, "Directory for <k>.ineq files")->required();
  occ->add_option("-p,--parties", oc.parties, "Parties whose settings and outcomes are relabeled (default all)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }
  if (show_config) {
    std::cout << app.config_to_str(true, true);
    return 0;
  }

  try {
    if (*fc) return facets.run(common);
    if (*gc) return gen.run(common);
    if (*cc) return cls.run(common);
    if (*sc) return ss.run(common);
    if (*mcc) return mc.run(common);
    if (*ncc) return nc.run(common);
    if (*rcc) return rc.run(common);
    if (*fxc) return fx.run(common);
    if (*occ) return oc.run(common);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParse;
  } catch (const ResourceCapError& e) {
    std::fprintf(stderr, "resource cap: %s\n", e.what());
    return kExitCap;
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInvariant;
  } catch (const DegenerateInputError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
