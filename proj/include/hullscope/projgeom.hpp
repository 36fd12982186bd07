#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hullscope/rational_disc.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

/// A point of P^n, stored as a unit-norm homogeneous representative.
struct ProjectivePoint {
  CVec rep;

  Eigen::Index dim() const { return rep.size() - 1; }
};

/// pi: C^{n+1} \ {0} -> P^n. Throws invalid_input on the zero vector.
ProjectivePoint project(const CVec& z);

/// The point [1 : w] of the standard affine chart.
ProjectivePoint from_chart(const CVec& w);

/// Geodesic Fubini-Study distance arccos |<x, y>| on unit representatives.
double fs_distance(const ProjectivePoint& x, const ProjectivePoint& y);

/// Great-circle distance between unit vectors of C^{n+1} = R^{2n+2}.
double sphere_distance(const CVec& u, const CVec& v);

/// Finite point cloud standing in for a compact set K.
///
/// Projective mode stores unit representatives of points of P^n; affine mode
/// stores points of C^n. `resolution` is the covering radius of the sample in
/// the mode's metric (Fubini-Study or Euclidean).
struct SampledCompact {
  Mode mode = Mode::projective;
  std::vector<CVec> points;
  bool connected = true;
  bool circular = false;
  double resolution = 0.0;

  /// n for both modes: P^n or C^n.
  Eigen::Index dim() const;

  friend bool operator==(const SampledCompact&, const SampledCompact&) = default;
};

/// Nonempty, finite, consistent dimensions, unit representatives in projective
/// mode, and the circularity spot check when the circular flag is set.
void validate(const SampledCompact& k);

/// Each stored p has e^{i pi/2} p within the declared resolution of the cloud.
bool circularity_spot_check(const SampledCompact& k);

/// Half the largest nearest-neighbour distance of the cloud.
double estimate_resolution(const SampledCompact& k);

/// Distance queries against a fixed sample, in the sample's own metric.
/// Affine samples go through a k-d tree; projective ones are scanned.
class NearestSample {
 public:
  explicit NearestSample(const SampledCompact& k);
  ~NearestSample();
  NearestSample(NearestSample&&) noexcept;
  NearestSample& operator=(NearestSample&&) noexcept;

  /// `point` is a representative in C^{n+1} (projective) or a point of C^n.
  double distance(const CVec& point) const;

  const SampledCompact& compact() const { return *k_; }

 private:
  struct Tree;
  const SampledCompact* k_;
  std::unique_ptr<Tree> tree_;
};

/// Sampling of S_K: the circle orbits e^{2 pi i k/m} x.rep of the samples.
struct SphereLift {
  std::vector<CVec> points;
  int orbit_count = 1;
};

/// Affine samples w are first sent to [1 : w].
SphereLift build_sphere_lift(const SampledCompact& k, int orbit_count = 64);

/// Every point has unit norm and its full sampled orbit is present.
bool is_orbit_closed(const SphereLift& lift, double tol = 1e-12);

/// The polynomial vector of a projective disc is its own lift to
/// C^{n+1} \ {0}. Throws not_liftable when the components share a zero on the
/// closed disc.
RationalDisc lift_disc(const RationalDisc& f);

/// sup_j max_t |F_j(e^{it})| / |F_j(0)| over `nodes` uniform circle nodes.
double blp_constant(std::span<const RationalDisc> lifts, int nodes = 1024);

}  // namespace hullscope
