#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hullscope/projgeom.hpp"
#include "hullscope/rational_disc.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

struct DivisorPoint {
  cplx point;
  int multiplicity = 1;

  friend bool operator==(const DivisorPoint&, const DivisorPoint&) = default;
};

/// Finite divisor sum m_k [zeta_k] with all zeta_k in the open unit disc.
struct Divisor {
  std::vector<DivisorPoint> points;

  int total_multiplicity() const;
  friend bool operator==(const Divisor&, const Divisor&) = default;
};

void validate(const Divisor& d, double boundary_margin = 1e-6);

struct DiscOptions {
  /// Roots with |zeta| in [1 - margin, 1 + margin] are boundary contacts.
  double boundary_margin = 1e-6;
  /// Roots closer than this are merged into one point of higher multiplicity.
  /// Fixed merge radius for root clusters. Multiple roots are merged beyond it
  /// by a scatter estimate, since their eigenvalues spread by ~eps^(1/m).
  double cluster_tol = 1e-8;
  /// |zeta| below this counts as the origin (J = +infinity).
  double origin_tol = 1e-14;
};

/// Zeros of <lambda, f> inside the disc, from companion-matrix eigenvalues.
/// Throws disc_in_hyperplane when the pairing vanishes identically and
/// boundary_contact when a zero sits within the margin of the unit circle.
Divisor hyperplane_divisor(const RationalDisc& f, const CVec& lambda, const DiscOptions& opts = {});

/// -sum m_k log|zeta_k|, +infinity if a point sits at the origin.
double j_functional(const Divisor& d, const DiscOptions& opts = {});
double j_functional(const RationalDisc& f, const CVec& lambda, const DiscOptions& opts = {});

/// rotation * prod ((zeta - a) / (1 - conj(a) zeta))^m
struct BlaschkeProduct {
  Divisor zeros;
  cplx rotation{1.0};

  cplx operator()(cplx zeta) const;
  cplx at_zero() const { return (*this)(0.0); }
};

BlaschkeProduct blaschke_from_divisor(const Divisor& d);

/// Affine coordinates z_i / <lambda, z> for i != dropped on P^n \ H. They form
/// a chart exactly when lambda[dropped] != 0.
struct AffineChart {
  Eigen::Index dropped = 0;
};

/// G written in the chart; has poles at the divisor of G with H.
CVec chart_value(const RationalDisc& g, const CVec& lambda, AffineChart chart, cplx zeta);

struct PoleCancellation {
  RationalDisc disc;  ///< F = (B / B(0)) * chart realization of G, affine mode
  Divisor divisor;
  BlaschkeProduct blaschke;
  double j = 0.0;
};

/// Multiplies the chart realization of G by B / B(0), where B is the Blaschke
/// product on the divisor of G with H. The result is holomorphic and zero-free
/// on the closed disc with the same center as the chart realization.
PoleCancellation cancel_poles(const RationalDisc& g, const CVec& lambda, AffineChart chart,
                              const DiscOptions& opts = {});

/// The value of f at zeta expressed in the coordinates of the sample k:
/// a representative for projective samples, a chart point for affine ones.
CVec disc_point_in(const RationalDisc& f, const SampledCompact& k, cplx zeta);

/// (2 pi / m) * #{nodes whose image lies within eps of the sample}.
double poletsky_measure(const RationalDisc& f, const SampledCompact& k, double eps, int m = 1024);
double poletsky_measure(const RationalDisc& f, const NearestSample& index, double eps, int m = 1024);

struct PoissonValue {
  double value = 0.0;
  int dropped = 0;  ///< nodes where u was -infinity
};

/// Trapezoidal mean of u over the boundary circle. u receives affine values
/// for affine discs and unit representatives for projective ones.
PoissonValue poisson_functional(const std::function<double(const CVec&)>& u, const RationalDisc& f,
                                int m = 1024);

struct Nudge {
  RationalDisc disc;
  CVec perturbation;
  bool applied = false;
};

/// For an affine disc whose image meets the origin, shifts the constant terms
/// of the numerators by 1e-8 times a random unit vector.
Nudge general_position_nudge(const RationalDisc& f, std::uint64_t seed);

}  // namespace hullscope
