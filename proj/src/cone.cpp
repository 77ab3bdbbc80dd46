#include "bellcpt/cone.hpp"

#include "bellcpt/detail/arith.hpp"
#include "bellcpt/errors.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <sstream>

namespace bellcpt {

Cone::Cone(std::size_t dim, std::vector<IntVector> rays) : dim_(dim) {
  std::map<IntVector, bool> seen;
  rays_.reserve(rays.size());
  for (auto& r : rays) {
    if (r.size() != dim) throw InvariantError("Cone: ray has wrong length");
    if (is_zero(r)) throw DegenerateInputError("Cone: zero ray");
    auto p = primitive_normalize(std::move(r), SignConvention::Keep);
    if (seen.emplace(p, true).second) rays_.push_back(std::move(p));
  }
}

Cone lift_polytope(const std::vector<Vertex>& vertices) {
  if (vertices.empty()) throw InvariantError("lift_polytope: empty vertex list");
  const std::size_t dim = vertices.front().coords.size();
  std::vector<IntVector> rays;
  rays.reserve(vertices.size());
  for (const auto& v : vertices) {
    if (v.coords.size() != dim) throw InvariantError("lift_polytope: vertices of mixed dimension");
    if (v.coords.empty() || v.coords[0] != 1) throw InvariantError("lift_polytope: vertex is not in lifted form");
    IntVector r;
    r.reserve(dim);
    for (int x : v.coords) r.emplace_back(x);
    rays.push_back(std::move(r));
  }
  return Cone(dim, std::move(rays));
}

Cone lift_points(const std::vector<IntVector>& points) {
  if (points.empty()) throw InvariantError("lift_points: empty point list");
  const std::size_t dim = points.front().size() + 1;
  std::vector<IntVector> rays;
  for (const auto& p : points) {
    if (p.size() + 1 != dim) throw InvariantError("lift_points: points of mixed dimension");
    IntVector r;
    r.reserve(dim);
    r.emplace_back(1);
    r.insert(r.end(), p.begin(), p.end());
    rays.push_back(std::move(r));
  }
  return Cone(dim, std::move(rays));
}

ProjectedCone project_rays(const Cone& cone, const IntMatrix& t) {
  if (t.rows() != cone.dim()) throw InvariantError("project_rays: T must have cone.dim rows");
  if (t.cols() == 0) throw InvariantError("project_rays: empty kernel (K = 0)");
  std::map<IntVector, std::size_t> where;
  std::vector<IntVector> rays;
  std::vector<std::vector<std::size_t>> sources;
  for (std::size_t i = 0; i < cone.size(); ++i) {
    IntVector w = left_multiply(cone.ray(i), t);
    if (is_zero(w)) continue;
    w = primitive_normalize(std::move(w), SignConvention::Keep);
    auto [it, inserted] = where.emplace(w, rays.size());
    if (inserted) {
      rays.push_back(std::move(w));
      sources.emplace_back();
    }
    sources[it->second].push_back(i);
  }
  ProjectedCone out;
  out.cone = Cone(t.cols(), std::move(rays));
  out.sources = std::move(sources);
  return out;
}

IntVector lift_back(const IntVector& b_tilde, const IntMatrix& t) {
  if (b_tilde.size() != t.cols()) throw InvariantError("lift_back: length must equal the columns of T");
  IntVector b = t * b_tilde;
  if (is_zero(b)) throw DegenerateInputError("lift_back: candidate lifts to the zero vector");
  return primitive_normalize(std::move(b), SignConvention::Keep);
}

namespace {

using detail::Overflow;

template <class Z>
std::size_t rank_of_rows(const std::vector<Z>& a, std::size_t d, const std::uint64_t* bits, std::size_t words,
                         std::size_t stop_at, std::vector<Z>& buf) {
  buf.clear();
  std::size_t rows = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t x = bits[w];
    while (x) {
      const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(x));
      x &= x - 1;
      buf.insert(buf.end(), a.begin() + static_cast<std::ptrdiff_t>(j * d),
                 a.begin() + static_cast<std::ptrdiff_t>((j + 1) * d));
      ++rows;
    }
  }
  if constexpr (std::is_same_v<Z, std::int64_t>) {
    try {
      return detail::echelon_rank(buf, rows, d, stop_at);
    } catch (const Overflow&) {
      std::vector<BigInt> big;
      std::size_t r2 = 0;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t x = bits[w];
        while (x) {
          const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(x));
          x &= x - 1;
          for (std::size_t k = 0; k < d; ++k) big.emplace_back(static_cast<long>(a[j * d + k]));
          ++r2;
        }
      }
      return detail::echelon_rank(big, r2, d, stop_at);
    }
  } else {
    return detail::echelon_rank(buf, rows, d, stop_at);
  }
}

template <class Z>
Z to_z(const BigInt& x) {
  if constexpr (std::is_same_v<Z, std::int64_t>) {
    if (!x.fits_slong_p()) throw Overflow{};
    return x.get_si();
  } else {
    return x;
  }
}

/// Extreme rays of {b : A b <= 0} for an m x d constraint matrix of column rank d.
template <class Z>
std::vector<std::vector<Z>> dd_core(const std::vector<Z>& a, std::size_t m, std::size_t d,
                                    const std::vector<std::size_t>& order, const DdOptions& opt, DdStats& st) {
  const std::size_t words = (m + 63) / 64;

  // Initial simplicial cone from the first d independent rows in insertion order.
  std::vector<std::size_t> basis;
  std::vector<IntVector> echelon;
  std::vector<std::size_t> pivots;
  std::vector<bool> used(m, false);
  for (std::size_t idx : order) {
    IntVector cand(d);
    for (std::size_t k = 0; k < d; ++k) cand[k] = BigInt(a[idx * d + k]);
    for (std::size_t e = 0; e < echelon.size(); ++e) {
      const BigInt v = cand[pivots[e]];
      if (v == 0) continue;
      const BigInt p = echelon[e][pivots[e]];
      for (std::size_t k = 0; k < d; ++k) cand[k] = cand[k] * p - echelon[e][k] * v;
      detail::reduce_content(std::span<BigInt>(cand));
    }
    auto it = std::find_if(cand.begin(), cand.end(), [](const BigInt& x) { return x != 0; });
    if (it == cand.end()) continue;
    pivots.push_back(static_cast<std::size_t>(it - cand.begin()));
    echelon.push_back(std::move(cand));
    basis.push_back(idx);
    used[idx] = true;
    if (basis.size() == d) break;
  }
  if (basis.size() != d) throw InvariantError("double description: constraint matrix is rank deficient");

  std::vector<Z> rays;
  std::vector<std::uint64_t> zs;
  rays.reserve(d * d);
  zs.reserve(d * words);
  for (std::size_t i = 0; i < d; ++i) {
    IntMatrix sub(0, d);
    for (std::size_t j = 0; j < d; ++j) {
      if (j == i) continue;
      IntVector row(d);
      for (std::size_t k = 0; k < d; ++k) row[k] = BigInt(a[basis[j] * d + k]);
      sub.append_row(row);
    }
    IntMatrix ker = integer_kernel_basis(sub);
    IntVector r = ker.column(0);
    BigInt s = 0;
    for (std::size_t k = 0; k < d; ++k) s += BigInt(a[basis[i] * d + k]) * r[k];
    if (s > 0)
      for (auto& x : r) x = -x;
    for (const auto& x : r) rays.push_back(to_z<Z>(x));
    zs.resize(zs.size() + words, 0);
    std::uint64_t* z = zs.data() + zs.size() - words;
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) z[basis[j] / 64] |= std::uint64_t{1} << (basis[j] % 64);
  }

  std::vector<Z> dots;
  std::vector<Z> buf;
  std::vector<std::uint64_t> inter(words);
  std::size_t inserted = d;
  const std::size_t need = d >= 2 ? d - 2 : 0;
  st.peak_rays = std::max(st.peak_rays, d);

  for (std::size_t idx : order) {
    if (used[idx]) continue;
    used[idx] = true;
    const std::size_t count = rays.size() / d;
    const std::span<const Z> row(a.data() + idx * d, d);
    dots.resize(count);
    std::vector<std::size_t> plus, minus, zero;
    for (std::size_t r = 0; r < count; ++r) {
      dots[r] = detail::dot(row, std::span<const Z>(rays.data() + r * d, d));
      const int sg = detail::sgn(dots[r]);
      (sg > 0 ? plus : sg < 0 ? minus : zero).push_back(r);
    }

    std::vector<Z> next;
    std::vector<std::uint64_t> next_z;
    next.reserve((minus.size() + zero.size()) * d);
    next_z.reserve((minus.size() + zero.size()) * words);
    auto keep = [&](std::size_t r, bool tight) {
      next.insert(next.end(), rays.begin() + static_cast<std::ptrdiff_t>(r * d),
                  rays.begin() + static_cast<std::ptrdiff_t>((r + 1) * d));
      next_z.insert(next_z.end(), zs.begin() + static_cast<std::ptrdiff_t>(r * words),
                    zs.begin() + static_cast<std::ptrdiff_t>((r + 1) * words));
      if (tight) next_z[next_z.size() - words + idx / 64] |= std::uint64_t{1} << (idx % 64);
    };
    for (auto r : minus) keep(r, false);
    for (auto r : zero) keep(r, true);

    for (auto p : plus) {
      const std::uint64_t* zp = zs.data() + p * words;
      for (auto n : minus) {
        const std::uint64_t* zn = zs.data() + n * words;
        std::size_t common = 0;
        for (std::size_t w = 0; w < words; ++w) {
          inter[w] = zp[w] & zn[w];
          common += static_cast<std::size_t>(std::popcount(inter[w]));
        }
        if (common < need) continue;
        ++st.adjacency_tests;
        if (rank_of_rows(a, d, inter.data(), words, need, buf) < need) continue;
        // (a.p) n - (a.n) p with a.p > 0 > a.n: a conic combination on the hyperplane.
        const Z& fp = dots[p];
        const Z fn = -dots[n];
        const std::size_t base = next.size();
        for (std::size_t k = 0; k < d; ++k)
          next.push_back(detail::add(detail::mul(fp, rays[n * d + k]), detail::mul(fn, rays[p * d + k])));
        detail::reduce_content(std::span<Z>(next.data() + base, d));
        for (std::size_t w = 0; w < words; ++w) next_z.push_back(inter[w]);
        next_z[next_z.size() - words + idx / 64] |= std::uint64_t{1} << (idx % 64);
        if (next.size() / d > opt.max_rays)
          throw ResourceCapError("double description: more than " + std::to_string(opt.max_rays) +
                                 " intermediate rays (raise the ray cap or add constraints)");
      }
    }
    rays.swap(next);
    zs.swap(next_z);
    ++inserted;
    st.peak_rays = std::max(st.peak_rays, rays.size() / d);
    if (opt.progress) opt.progress(inserted, m, rays.size() / d);
  }

  std::vector<std::vector<Z>> out;
  const std::size_t count = rays.size() / d;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r)
    out.emplace_back(rays.begin() + static_cast<std::ptrdiff_t>(r * d),
                     rays.begin() + static_cast<std::ptrdiff_t>((r + 1) * d));
  return out;
}

std::vector<std::size_t> insertion_order(const std::vector<IntVector>& rows, InsertionOrder order) {
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (order == InsertionOrder::Lexicographic)
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return rows[x] < rows[y]; });
  return idx;
}

}  // namespace

std::vector<FacetNormal> enumerate_facets_dd(const Cone& cone, const DdOptions& options, DdStats* stats) {
  if (cone.size() == 0) throw InvariantError("enumerate_facets_dd: cone has no rays");
  DdStats local;
  DdStats& st = stats ? *stats : local;

  // Work in the linear span of the rays: b = Q c with Q an integer basis of the row
  // space, so the dual cone is pointed and normals are unique up to scale.
  const IntMatrix w = cone.ray_matrix();
  const std::size_t r = rank(w);
  std::vector<IntVector> rows = cone.rays();
  std::optional<IntMatrix> q;
  if (r < cone.dim()) {
    IntMatrix lineality = integer_kernel_basis(w);
    q = integer_kernel_basis(lineality.transpose());
    for (auto& row : rows) row = left_multiply(row, *q);
  }
  const std::size_t d = r;
  const std::size_t m = rows.size();
  const auto order = insertion_order(rows, options.order);

  std::vector<IntVector> normals;
  bool done = false;
  try {
    std::vector<std::int64_t> a;
    a.reserve(m * d);
    for (const auto& row : rows)
      for (const auto& x : row) {
        if (!x.fits_slong_p()) throw Overflow{};
        a.push_back(x.get_si());
      }
    auto res = dd_core<std::int64_t>(a, m, d, order, options, st);
    for (auto& v : res) {
      IntVector b;
      b.reserve(d);
      for (auto x : v) b.emplace_back(static_cast<long>(x));
      normals.push_back(std::move(b));
    }
    done = true;
  } catch (const Overflow&) {
    st = DdStats{};
  }
  if (!done) {
    st.used_bigint = true;
    std::vector<BigInt> a;
    a.reserve(m * d);
    for (const auto& row : rows) a.insert(a.end(), row.begin(), row.end());
    normals = dd_core<BigInt>(a, m, d, order, options, st);
  }

  std::vector<FacetNormal> out;
  out.reserve(normals.size());
  for (auto& c : normals) {
    IntVector b = q ? (*q) * c : std::move(c);
    b = primitive_normalize(std::move(b), SignConvention::Keep);
    FacetNormal f;
    for (std::size_t i = 0; i < cone.size(); ++i)
      if (dot(b, cone.ray(i)) == 0) f.saturating_ray_indices.push_back(i);
    f.vector = std::move(b);
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const FacetNormal& x, const FacetNormal& y) { return x.vector < y.vector; });
  return out;
}

FacetChecker::FacetChecker(const Cone& cone) : cone_(&cone) {
  std::vector<std::int64_t> flat;
  flat.reserve(cone.size() * cone.dim());
  bool fits = true;
  for (const auto& r : cone.rays()) {
    auto n = narrow(r);
    if (!n) {
      fits = false;
      break;
    }
    flat.insert(flat.end(), n->begin(), n->end());
  }
  if (fits) {
    narrow_rays_ = std::move(flat);
    cone_rank_ = rank_int64(*narrow_rays_, cone.size(), cone.dim());
  } else {
    cone_rank_ = rank(cone.ray_matrix());
  }
}

FacetCheck FacetChecker::check(const IntVector& candidate) const {
  const Cone& cone = *cone_;
  if (candidate.size() != cone.dim()) throw InvariantError("is_facet: candidate has wrong length");
  FacetCheck res;
  res.cone_rank = cone_rank_;
  const std::size_t d = cone.dim();
  auto small = narrow_rays_ ? narrow(candidate) : std::nullopt;
  bool valid = true;
  for (std::size_t i = 0; i < cone.size() && valid; ++i) {
    int sg;
    if (small) {
      try {
        sg = detail::sgn(detail::dot(std::span<const std::int64_t>(narrow_rays_->data() + i * d, d), *small));
      } catch (const Overflow&) {
        sg = ::sgn(dot(candidate, cone.ray(i)));
      }
    } else {
      sg = ::sgn(dot(candidate, cone.ray(i)));
    }
    if (sg > 0) valid = false;
    else if (sg == 0) res.saturating.push_back(i);
  }
  if (!valid) {
    res.status = FacetStatus::Invalid;
    res.saturating.clear();
    return res;
  }
  if (narrow_rays_) {
    std::vector<std::int64_t> sub;
    sub.reserve(res.saturating.size() * d);
    for (auto i : res.saturating)
      sub.insert(sub.end(), narrow_rays_->begin() + static_cast<std::ptrdiff_t>(i * d),
                 narrow_rays_->begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
    res.saturating_rank = rank_int64(sub, res.saturating.size(), d);
  } else {
    IntMatrix sub(0, d);
    for (auto i : res.saturating) sub.append_row(cone.ray(i));
    res.saturating_rank = rank(sub);
  }
  res.status = (cone_rank_ >= 1 && res.saturating_rank == cone_rank_ - 1) ? FacetStatus::Facet : FacetStatus::NotFacet;
  return res;
}

FacetCheck is_facet(const IntVector& candidate, const Cone& cone) { return FacetChecker(cone).check(candidate); }

std::vector<FacetNormal> cpt_facets(const Cone& cone, const IntMatrix& g, const FacetChecker& checker,
                                    const DdOptions& options, CptStats* stats) {
  if (g.cols() != cone.dim()) throw InvariantError("cpt: constraint width does not match the cone");
  CptStats st;
  std::vector<FacetNormal> out;
  const IntMatrix t = integer_kernel_basis(g);
  st.kernel_dim = t.cols();
  if (t.cols() > 0) {
    const ProjectedCone pc = project_rays(cone, t);
    st.projected_rays = pc.cone.size();
    if (pc.cone.size() > 0) {
      const auto facets = enumerate_facets_dd(pc.cone, options);
      st.candidates = facets.size();
      for (const auto& f : facets) {
        IntVector b;
        try {
          b = lift_back(f.vector, t);
        } catch (const DegenerateInputError&) {
          continue;
        }
        auto c = checker.check(b);
        if (!c.facet()) continue;
        out.push_back({std::move(b), std::move(c.saturating)});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const FacetNormal& x, const FacetNormal& y) { return x.vector < y.vector; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (stats) *stats = st;
  return out;
}

std::string dump_cone(const Cone& cone, const std::string& header) {
  std::ostringstream os;
  if (!header.empty()) os << header << '\n';
  for (const auto& r : cone.rays()) {
    for (std::size_t k = 0; k < r.size(); ++k) os << (k ? " " : "") << r[k].get_str();
    os << '\n';
  }
  return os.str();
}

}  // namespace bellcpt
