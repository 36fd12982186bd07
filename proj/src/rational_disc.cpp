#include "hullscope/rational_disc.hpp"

#include <algorithm>
#include <cmath>

namespace hullscope {

int RationalDisc::degree() const {
  int d = std::max(0, denominator.degree());
  for (const UPoly& p : components) d = std::max(d, p.degree());
  return d;
}

CVec RationalDisc::numerators(cplx zeta) const {
  CVec v(size());
  for (Eigen::Index i = 0; i < size(); ++i) v(i) = components[static_cast<std::size_t>(i)](zeta);
  return v;
}

CVec RationalDisc::operator()(cplx zeta) const {
  CVec v = numerators(zeta);
  if (mode == Mode::affine) v /= denominator(zeta);
  return v;
}

std::vector<cplx> common_zeros_in_closed_disc(std::span<const UPoly> comps, double gcd_tol,
                                              double confirm_tol) {
  std::vector<UPoly> nonzero;
  for (const UPoly& p : comps)
    if (!p.is_zero()) nonzero.push_back(p);
  if (nonzero.empty()) return {};
  const UPoly g = numerical_gcd(nonzero, gcd_tol);
  std::vector<cplx> out;
  for (const cplx z : roots(g)) {
    if (std::abs(z) > 1.0 + gcd_tol) continue;
    const bool shared = std::all_of(nonzero.begin(), nonzero.end(), [&](const UPoly& p) {
      return std::abs(p(z)) <= confirm_tol * p.l1_norm();
    });
    if (shared) out.push_back(z);
  }
  return out;
}

void validate(const RationalDisc& disc) {
  if (disc.components.empty()) throw Error(ErrorCode::invalid_input, "disc has no components");
  if (std::all_of(disc.components.begin(), disc.components.end(),
                  [](const UPoly& p) { return p.is_zero(); }))
    throw Error(ErrorCode::invalid_input, "all disc components vanish identically");
  if (disc.mode == Mode::projective) {
    if (!common_zeros_in_closed_disc(disc.components).empty())
      throw Error(ErrorCode::not_liftable, "components share a zero on the closed disc");
  } else {
    if (disc.denominator.is_zero())
      throw Error(ErrorCode::invalid_input, "disc denominator vanishes identically");
    for (const cplx r : roots(disc.denominator))
      if (std::abs(r) <= 1.0 + 1e-10)
        throw Error(ErrorCode::invalid_input, "disc denominator vanishes on the closed disc");
  }
}

std::vector<cplx> circle_nodes(int m) {
  std::vector<cplx> nodes(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) nodes[static_cast<std::size_t>(k)] = std::polar(1.0, kTwoPi * k / m);
  return nodes;
}

}  // namespace hullscope
