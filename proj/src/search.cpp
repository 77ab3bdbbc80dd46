#include "bellcpt/search.hpp"

#include "bellcpt/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

namespace bellcpt {

namespace {

std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

std::size_t factorial(int k) {
  std::size_t f = 1;
  for (int i = 2; i <= k; ++i) f = sat_mul(f, static_cast<std::size_t>(i));
  return f;
}

template <class Z>
struct SearchState {
  std::vector<int> src;
  std::vector<std::vector<int>> map;
  std::vector<std::vector<int>> sign;
  std::vector<char> party_used;
  std::uint64_t settings_used = 0;
  std::vector<std::size_t> off;
  std::vector<int> osign;
};

template <class Z>
CanonicalResult canonical_impl(const Inequality& ineq, const std::vector<Z>& c, const GroupSpec& spec) {
  const Scenario& s = ineq.scenario();
  const int n = s.parties();
  for (int p = 0; p < n; ++p)
    if (s.settings(p) > 63) throw InvariantError("canonical_form: more than 63 settings per party");

  SearchState<Z> init;
  init.src.assign(static_cast<std::size_t>(n), -1);
  init.map.resize(static_cast<std::size_t>(n));
  init.sign.resize(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    init.map[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(s.settings(t)) + 1, 0);
    init.sign[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(s.settings(t)) + 1, 1);
  }
  init.party_used.assign(static_cast<std::size_t>(n), 0);
  init.off = {0};
  init.osign = {1};

  std::vector<SearchState<Z>> frontier{init};
  std::vector<Z> result(c.size());
  result[0] = c[0];
  std::size_t nodes = 0;
  std::vector<Z> block, best;

  for (int t = n - 1; t >= 0; --t) {
    const auto tt = static_cast<std::size_t>(t);
    const std::size_t stride = s.stride(t);
    const int m = s.settings(t);
    for (int u = 1; u <= m; ++u) {
      std::vector<SearchState<Z>> next;
      bool have_best = false;
      for (auto& st : frontier) {
        std::vector<int> parties;
        if (u == 1) {
          if (spec.party_permutations) {
            for (int p = 0; p < n; ++p)
              if (!st.party_used[static_cast<std::size_t>(p)] && s.settings(p) == m) parties.push_back(p);
          } else {
            parties.push_back(t);
          }
        } else {
          parties.push_back(st.src[tt]);
        }
        for (int p : parties) {
          const std::uint64_t used = (u == 1) ? 0 : st.settings_used;
          const int s_lo = spec.setting_permutations ? 1 : u;
          const int s_hi = spec.setting_permutations ? m : u;
          for (int sp = s_lo; sp <= s_hi; ++sp) {
            if (used & (std::uint64_t{1} << sp)) continue;
            const std::size_t base = static_cast<std::size_t>(sp) * s.stride(p);
            block.resize(stride);
            for (std::size_t r = 0; r < stride; ++r) {
              const Z& x = c[base + st.off[r]];
              block[r] = st.osign[r] > 0 ? x : Z(-x);
            }
            for (int sg = 1; sg >= -1; sg -= 2) {
              if (sg < 0) {
                if (!spec.sign_flips) break;
                for (auto& x : block) x = -x;
              }
              if (++nodes > spec.max_nodes)
                throw ResourceCapError("canonical_form: search exceeded " + std::to_string(spec.max_nodes) +
                                       " nodes; restrict the group (GroupSpec) or raise the cap");
              int cmp = 0;
              if (have_best) {
                for (std::size_t r = 0; r < stride && cmp == 0; ++r)
                  cmp = block[r] < best[r] ? -1 : (best[r] < block[r] ? 1 : 0);
              }
              if (have_best && cmp > 0) continue;
              if (!have_best || cmp < 0) {
                best = block;
                have_best = true;
                next.clear();
              }
              SearchState<Z> child = st;
              if (u == 1) {
                child.src[tt] = p;
                child.party_used[static_cast<std::size_t>(p)] = 1;
                child.settings_used = 0;
              }
              child.settings_used |= std::uint64_t{1} << sp;
              child.map[tt][static_cast<std::size_t>(u)] = sp;
              child.sign[tt][static_cast<std::size_t>(u)] = sg;
              next.push_back(std::move(child));
            }
          }
        }
      }
      std::copy(best.begin(), best.end(), result.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(u) * stride));
      frontier = std::move(next);
    }
    // Extend the suffix offset tables by the now complete party t.
    for (auto& st : frontier) {
      std::vector<std::size_t> off((static_cast<std::size_t>(m) + 1) * stride);
      std::vector<int> osign(off.size());
      const std::size_t ps = s.stride(st.src[tt]);
      for (int d = 0; d <= m; ++d)
        for (std::size_t r = 0; r < stride; ++r) {
          const std::size_t k = static_cast<std::size_t>(d) * stride + r;
          off[k] = (d ? static_cast<std::size_t>(st.map[tt][static_cast<std::size_t>(d)]) * ps : 0) + st.off[r];
          osign[k] = (d ? st.sign[tt][static_cast<std::size_t>(d)] : 1) * st.osign[r];
        }
      st.off = std::move(off);
      st.osign = std::move(osign);
    }
  }

  const auto& fin = frontier.front();
  Relabeling g = Relabeling::identity(s);
  for (int t = 0; t < n; ++t) {
    const auto tt = static_cast<std::size_t>(t);
    const auto p = static_cast<std::size_t>(fin.src[tt]);
    g.party_perm[p] = t;
    for (int u = 1; u <= s.settings(t); ++u) {
      const auto sp = static_cast<std::size_t>(fin.map[tt][static_cast<std::size_t>(u)] - 1);
      g.setting_perm[p][sp] = u;
      g.sign[p][sp] = fin.sign[tt][static_cast<std::size_t>(u)];
    }
  }
  IntVector out(result.size());
  for (std::size_t i = 0; i < result.size(); ++i) {
    if constexpr (std::is_same_v<Z, std::int64_t>) out[i] = static_cast<long>(result[i]);
    else out[i] = result[i];
  }
  return CanonicalResult{Inequality(s, std::move(out)), std::move(g)};
}

}  // namespace

std::size_t group_order(const Scenario& s, const GroupSpec& spec) {
  std::size_t order = 1;
  if (spec.party_permutations) {
    std::map<int, int> by_count;
    for (int m : s.settings()) ++by_count[m];
    for (const auto& [m, k] : by_count) order = sat_mul(order, factorial(k));
  }
  for (int m : s.settings()) {
    if (spec.setting_permutations) order = sat_mul(order, factorial(m));
    if (spec.sign_flips)
      for (int i = 0; i < m; ++i) order = sat_mul(order, 2);
  }
  return order;
}

CanonicalResult canonical_form_with_element(const Inequality& ineq, const GroupSpec& spec) {
  const auto& b = ineq.coefficients();
  if (auto small = narrow(b)) {
    // Negation stays in range because int64 minimum is excluded.
    if (std::none_of(small->begin(), small->end(), [](std::int64_t x) { return x == std::numeric_limits<std::int64_t>::min(); }))
      return canonical_impl<std::int64_t>(ineq, *small, spec);
  }
  return canonical_impl<BigInt>(ineq, b, spec);
}

Inequality canonical_form(const Inequality& ineq, const GroupSpec& spec) {
  return canonical_form_with_element(ineq, spec).form;
}

std::vector<EquivalenceClass> classify(const std::vector<Inequality>& ineqs, const GroupSpec& spec) {
  std::vector<EquivalenceClass> out;
  std::map<IntVector, std::size_t> by_canonical;
  std::map<IntVector, std::size_t> memo;
  for (const auto& q : ineqs) {
    if (!out.empty() && !(q.scenario() == out.front().canonical.scenario()))
      throw InvariantError("classify: inequalities from different scenarios");
    std::size_t k;
    if (auto it = memo.find(q.coefficients()); it != memo.end()) {
      k = it->second;
    } else {
      Inequality c = canonical_form(q, spec);
      auto [jt, inserted] = by_canonical.emplace(c.coefficients(), out.size());
      if (inserted) out.push_back(EquivalenceClass{c, q, 0, {}});
      k = jt->second;
      memo.emplace(q.coefficients(), k);
    }
    ++out[k].members_found;
  }
  return out;
}

std::size_t simplicity(const EquivalenceClass& c) {
  if (symmetric_notation(c.representative)) {
    const Scenario& s = c.representative.scenario();
    const auto& b = c.representative.coefficients();
    std::size_t terms = 0;
    for (std::size_t i = 1; i < b.size(); ++i) {
      if (b[i] == 0) continue;
      const auto t = s.tuple_of(i);
      if (std::is_sorted(t.begin(), t.end(), std::greater<>())) ++terms;
    }
    return terms;
  }
  return c.canonical.term_count();
}

void sort_classes(std::vector<EquivalenceClass>& classes) {
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  for (std::size_t i = 0; i < classes.size(); ++i) keys.emplace_back(simplicity(classes[i]), i);
  std::stable_sort(keys.begin(), keys.end(), [&](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return classes[x.second].canonical.coefficients() < classes[y.second].canonical.coefficients();
  });
  std::vector<EquivalenceClass> sorted;
  sorted.reserve(classes.size());
  for (const auto& k : keys) sorted.push_back(std::move(classes[k.second]));
  classes = std::move(sorted);
}

bool verify_reduction(const Inequality& candidate, const XiAssignment& xi, const Inequality& lower,
                      const Embedding& embedding) {
  const Scenario& ts = candidate.scenario();
  const Scenario& ls = lower.scenario();
  if (static_cast<int>(embedding.party_map.size()) != ls.parties()) return false;
  const auto extra = embedding.extra_parties(ts);
  if (xi.values.size() != extra.size()) return false;
  Substitution sub;
  sub.target = ls;
  sub.letters.resize(static_cast<std::size_t>(ts.parties()));
  for (int j = 0; j < ls.parties(); ++j) {
    const int q = embedding.party_map[static_cast<std::size_t>(j)];
    if (ts.settings(q) != ls.settings(j)) return false;
    for (int st = 1; st <= ls.settings(j); ++st)
      sub.letters[static_cast<std::size_t>(q)].push_back(Substitution::Target{false, 1, j, st});
  }
  for (std::size_t k = 0; k < extra.size(); ++k) {
    if (static_cast<int>(xi.values[k].size()) != ts.settings(extra[k])) return false;
    for (int v : xi.values[k]) sub.letters[static_cast<std::size_t>(extra[k])].push_back(Substitution::Target{true, v, 0, 0});
  }
  return is_positive_multiple(substitute(candidate, sub), lower.coefficients());
}

bool verify_reduction(const Inequality& candidate, const XiAssignment& xi, const Inequality& lower) {
  return verify_reduction(candidate, xi, lower, Embedding::leading(lower.scenario().parties()));
}

std::vector<EquivalenceClass> generalize(const std::vector<ReductionSpec>& reductions, const Scenario& target,
                                         const std::vector<Relabeling>& symmetry, const GeneralizeOptions& options,
                                         std::vector<XiReport>* reports) {
  if (reductions.empty()) throw InvariantError("generalize: at least one reduction is required");
  for (const auto& g : symmetry) g.validate(target);

  const auto vertices = enumerate_vertices(target);
  const Cone cone = lift_polytope(vertices);
  const FacetChecker checker(cone);
  const ConstraintSystem sym = symmetry_rows(symmetry, target);

  std::vector<std::vector<XiAssignment>> per_spec;
  for (const auto& r : reductions) per_spec.push_back(enumerate_xi(target, r.embedding));
  std::vector<std::vector<XiAssignment>> combos{{}};
  for (const auto& list : per_spec) {
    std::vector<std::vector<XiAssignment>> grown;
    for (const auto& c : combos)
      for (const auto& xi : list) {
        auto g = c;
        g.push_back(xi);
        grown.push_back(std::move(g));
      }
    combos = std::move(grown);
  }

  struct Branch {
    XiReport report;
    std::vector<Inequality> found;
  };
  std::vector<Branch> branches(combos.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto run = [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    Branch& br = branches[k];
    br.report.index = k;
    br.report.total = combos.size();
    br.report.xi = combos[k];
    ConstraintSystem g(target.lifted_dimension());
    g.append(sym);
    for (std::size_t r = 0; r < reductions.size(); ++r)
      g.append(saturation_rows(
          build_extended_behaviors(reductions[r].lower, combos[k][r], target, reductions[r].embedding)));
    CptStats st;
    const auto facets = cpt_facets(cone, g.matrix(), checker, options.dd, &st);
    br.report.kernel_dim = st.kernel_dim;
    br.report.projected_rays = st.projected_rays;
    br.report.candidates = st.candidates;
    br.report.facets = facets.size();
    for (const auto& f : facets) {
      Inequality q = Inequality::from_cone_normal(target, f.vector);
      const bool trivial = is_trivial(q);
      if (trivial && !options.keep_trivial) continue;
      // a positivity facet in the subspace reduces to 0 <= 0
      bool ok = true;
      for (std::size_t r = 0; r < reductions.size() && ok; ++r)
        ok = trivial || verify_reduction(q, combos[k][r], reductions[r].lower, reductions[r].embedding);
      if (!ok) continue;
      ++br.report.reduced;
      br.found.push_back(std::move(q));
    }
    br.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (options.progress) {
      std::lock_guard lock(progress_mutex);
      options.progress(br.report);
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, combos.size()));
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= combos.size()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      try {
        run(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Merge in xi order; identical normals from different branches count once.
  std::map<IntVector, std::size_t> where;
  std::vector<Inequality> distinct;
  std::vector<std::vector<std::vector<XiAssignment>>> wit;
  for (auto& br : branches) {
    if (reports) reports->push_back(br.report);
    for (auto& q : br.found) {
      auto [it, inserted] = where.emplace(q.coefficients(), distinct.size());
      if (inserted) {
        distinct.push_back(q);
        wit.emplace_back();
      }
      wit[it->second].push_back(br.report.xi);
    }
  }
  auto classes = classify(distinct, options.group);
  std::map<IntVector, std::size_t> class_of;
  for (std::size_t c = 0; c < classes.size(); ++c) class_of.emplace(classes[c].canonical.coefficients(), c);
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    auto& cls = classes[class_of.at(canonical_form(distinct[i], options.group).coefficients())];
    for (auto& w : wit[i])
      if (std::find(cls.witnesses.begin(), cls.witnesses.end(), w) == cls.witnesses.end()) cls.witnesses.push_back(w);
  }
  for (auto& cls : classes) std::sort(cls.witnesses.begin(), cls.witnesses.end());
  sort_classes(classes);
  return classes;
}

std::vector<EquivalenceClass> generalize(const Inequality& lower, const std::vector<int>& extra_settings,
                                         const std::vector<Relabeling>& symmetry, const GeneralizeOptions& options,
                                         std::vector<XiReport>* reports) {
  std::vector<int> settings = lower.scenario().settings();
  settings.insert(settings.end(), extra_settings.begin(), extra_settings.end());
  const Scenario target(settings);
  return generalize({ReductionSpec{lower, Embedding::leading(lower.scenario().parties())}}, target, symmetry, options,
                    reports);
}

std::vector<Inequality> local_polytope_facets(const Scenario& s, const DdOptions& options, DdStats* stats) {
  const Cone cone = lift_polytope(enumerate_vertices(s));
  const auto facets = enumerate_facets_dd(cone, options, stats);
  std::vector<Inequality> out;
  out.reserve(facets.size());
  for (const auto& f : facets) out.push_back(Inequality::from_cone_normal(s, f.vector));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bellcpt
