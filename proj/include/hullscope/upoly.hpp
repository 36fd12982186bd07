#pragma once

#include <span>
#include <vector>

#include "hullscope/types.hpp"

namespace hullscope {

/// Univariate complex polynomial, coefficients in ascending powers of zeta.
struct UPoly {
  std::vector<cplx> coeffs;

  UPoly() = default;
  UPoly(std::initializer_list<cplx> c) : coeffs(c) {}
  explicit UPoly(std::vector<cplx> c) : coeffs(std::move(c)) {}

  static UPoly constant(cplx c) { return UPoly{c}; }
  static UPoly monomial(int k, cplx c = 1.0);
  static UPoly from_roots(std::span<const cplx> roots, cplx leading = 1.0);

  /// Index of the highest coefficient above tol * max|c|; -1 for zero.
  int degree(double rel_tol = 0.0) const;
  bool is_zero(double rel_tol = 0.0) const { return degree(rel_tol) < 0; }
  double max_abs() const;
  double l1_norm() const;

  cplx operator()(cplx z) const;
  UPoly derivative() const;
  UPoly trimmed(double rel_tol = 0.0) const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(cplx s, const UPoly& a);
  friend bool operator==(const UPoly&, const UPoly&) = default;
};

/// Quotient and remainder of a / b; b must have a nonzero leading term.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);

/// Roots from the eigenvalues of the companion matrix, each refined by one
/// Newton step when that step reduces |p|.
std::vector<cplx> roots(const UPoly& p);

/// Monic numerical GCD by the Euclidean algorithm. Remainders whose max-norm
/// drops below rel_tol times the divisor's max-norm are treated as zero.
UPoly numerical_gcd(std::span<const UPoly> polys, double rel_tol = 1e-10);

}  // namespace hullscope
