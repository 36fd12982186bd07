#pragma once

#include <vector>

#include "hullscope/types.hpp"
#include "hullscope/upoly.hpp"

namespace hullscope {

/// An analytic disc given by polynomial components.
///
/// Projective mode: zeta -> [P_0(zeta) : ... : P_n(zeta)] in P^n. The
/// components must not vanish simultaneously on the closed unit disc.
///
/// Affine mode: zeta -> (P_0, ..., P_k)(zeta) / Q(zeta), a holomorphic map of
/// the closed disc into C^{k+1}. The denominator Q has no zeros on the closed
/// disc; it is the constant 1 for polynomial discs.
struct RationalDisc {
  Mode mode = Mode::projective;
  std::vector<UPoly> components;
  UPoly denominator{1.0};

  static RationalDisc projective(std::vector<UPoly> comps) {
    return RationalDisc{Mode::projective, std::move(comps), UPoly{1.0}};
  }
  static RationalDisc affine(std::vector<UPoly> comps, UPoly denom = UPoly{1.0}) {
    return RationalDisc{Mode::affine, std::move(comps), std::move(denom)};
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(components.size()); }

  /// Largest polynomial degree among the components and the denominator.
  int degree() const;

  /// Component polynomials evaluated at zeta, without the denominator.
  CVec numerators(cplx zeta) const;

  /// Affine value (numerators / denominator) or the raw homogeneous vector.
  CVec operator()(cplx zeta) const;

  friend bool operator==(const RationalDisc&, const RationalDisc&) = default;
};

/// Zeros in the closed unit disc shared by every nonzero component, found as
/// roots of the numerical GCD and confirmed by evaluation.
std::vector<cplx> common_zeros_in_closed_disc(std::span<const UPoly> comps,
                                              double gcd_tol = 1e-10,
                                              double confirm_tol = 1e-8);

/// Throws invalid_input / not_liftable when the disc invariants fail.
void validate(const RationalDisc& disc);

/// Uniform quadrature nodes exp(2 pi i k / m), k = 0..m-1.
std::vector<cplx> circle_nodes(int m);

}  // namespace hullscope
