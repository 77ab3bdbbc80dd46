#pragma once

#include "bellcpt/exactlinalg.hpp"
#include "bellcpt/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bellcpt {

/// Finitely generated cone: conic hull of primitive integer rays of length `dim`.
class Cone {
public:
  Cone() = default;
  /// Normalizes each ray by its content (direction kept) and drops duplicates.
  /// Throws DegenerateInputError on a zero ray.
  Cone(std::size_t dim, std::vector<IntVector> rays);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return rays_.size(); }
  const std::vector<IntVector>& rays() const noexcept { return rays_; }
  const IntVector& ray(std::size_t i) const { return rays_.at(i); }
  IntMatrix ray_matrix() const { return IntMatrix::from_rows(rays_, dim_); }

private:
  std::size_t dim_ = 0;
  std::vector<IntVector> rays_;
};

/// Facet of a cone in "normal . ray <= 0" orientation.
struct FacetNormal {
  IntVector vector;
  std::vector<std::size_t> saturating_ray_indices;  ///< sorted

  friend bool operator==(const FacetNormal&, const FacetNormal&) = default;
};

/// Cone over the lifted vertices (leading coordinate 1). Validates and deduplicates.
Cone lift_polytope(const std::vector<Vertex>& vertices);
/// Same for arbitrary integer points: each v becomes the ray (1, v).
Cone lift_points(const std::vector<IntVector>& points);

struct ProjectedCone {
  Cone cone;
  /// sources[j] lists the indices of the original rays whose image is ray j of `cone`.
  std::vector<std::vector<std::size_t>> sources;
};

/// Rays w^T T, made primitive; zero images dropped, duplicates merged.
ProjectedCone project_rays(const Cone& cone, const IntMatrix& t);

enum class InsertionOrder { Lexicographic, AsGiven };

struct DdOptions {
  /// Limit on simultaneously stored intermediate rays.
  std::size_t max_rays = 5'000'000;
  InsertionOrder order = InsertionOrder::Lexicographic;
  /// Called after each inserted constraint with (inserted, total, current ray count).
  std::function<void(std::size_t, std::size_t, std::size_t)> progress;
};

struct DdStats {
  std::size_t peak_rays = 0;
  std::size_t adjacency_tests = 0;
  bool used_bigint = false;
};

/// Complete irredundant facet list of the conic hull via the double description
/// method. Normals are primitive, in the cone's linear span, and sorted
/// lexicographically. Throws ResourceCapError when `max_rays` is exceeded.
std::vector<FacetNormal> enumerate_facets_dd(const Cone& cone, const DdOptions& options = {},
                                             DdStats* stats = nullptr);

/// primitive(T * b_tilde) with orientation kept. Throws DegenerateInputError on zero.
IntVector lift_back(const IntVector& b_tilde, const IntMatrix& t);

enum class FacetStatus { Facet, NotFacet, Invalid };

struct FacetCheck {
  FacetStatus status = FacetStatus::Invalid;
  std::vector<std::size_t> saturating;  ///< rays with candidate . ray == 0
  std::size_t saturating_rank = 0;
  std::size_t cone_rank = 0;
  bool facet() const noexcept { return status == FacetStatus::Facet; }
};

/// Reusable facet test against a fixed cone; caches the cone rank and a narrow copy
/// of the rays.
class FacetChecker {
public:
  explicit FacetChecker(const Cone& cone);
  FacetCheck check(const IntVector& candidate) const;
  std::size_t cone_rank() const noexcept { return cone_rank_; }

private:
  const Cone* cone_;
  std::optional<std::vector<std::int64_t>> narrow_rays_;
  std::size_t cone_rank_ = 0;
};

/// Facet iff valid (candidate . r <= 0 for all rays) and the saturating rays have
/// rank rank(rays) - 1.
FacetCheck is_facet(const IntVector& candidate, const Cone& cone);

struct CptStats {
  std::size_t kernel_dim = 0;
  std::size_t projected_rays = 0;
  std::size_t candidates = 0;
};

/// Facets of `cone` whose normals n satisfy g n = 0, found without enumerating the
/// full facet list: rays are projected onto ker(g), the smaller cone's facets are
/// enumerated and lifted back, and only lifts that are facets of `cone` are kept.
/// `checker` must have been built for `cone`. Sorted by normal vector.
std::vector<FacetNormal> cpt_facets(const Cone& cone, const IntMatrix& g, const FacetChecker& checker,
                                    const DdOptions& options = {}, CptStats* stats = nullptr);

/// Debug dump: one ray per line, space-separated, optional header line first.
std::string dump_cone(const Cone& cone, const std::string& header = {});

}  // namespace bellcpt
