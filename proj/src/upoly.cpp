#include "hullscope/upoly.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace hullscope {

UPoly UPoly::monomial(int k, cplx c) {
  std::vector<cplx> v(static_cast<std::size_t>(k) + 1, 0.0);
  v.back() = c;
  return UPoly(std::move(v));
}

UPoly UPoly::from_roots(std::span<const cplx> rts, cplx leading) {
  UPoly p{leading};
  for (const cplx r : rts) p = p * UPoly{-r, 1.0};
  return p;
}

double UPoly::max_abs() const {
  double m = 0.0;
  for (const cplx c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

double UPoly::l1_norm() const {
  double s = 0.0;
  for (const cplx c : coeffs) s += std::abs(c);
  return s;
}

int UPoly::degree(double rel_tol) const {
  const double cut = rel_tol * max_abs();
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) {
    const double a = std::abs(coeffs[static_cast<std::size_t>(k)]);
    if (a > cut && a != 0.0) return k;
  }
  return -1;
}

cplx UPoly::operator()(cplx z) const {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

UPoly UPoly::derivative() const {
  if (coeffs.size() <= 1) return UPoly{0.0};
  std::vector<cplx> d(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs[k];
  return UPoly(std::move(d));
}

UPoly UPoly::trimmed(double rel_tol) const {
  const int deg = degree(rel_tol);
  if (deg < 0) return UPoly{};
  return UPoly(std::vector<cplx>(coeffs.begin(), coeffs.begin() + deg + 1));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<cplx> c(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs.size(); ++k) c[k] += a.coeffs[k];
  for (std::size_t k = 0; k < b.coeffs.size(); ++k) c[k] += b.coeffs[k];
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + cplx(-1.0) * b; }

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.coeffs.empty() || b.coeffs.empty()) return UPoly{};
  std::vector<cplx> c(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return UPoly(std::move(c));
}

UPoly operator*(cplx s, const UPoly& a) {
  UPoly r = a;
  for (cplx& c : r.coeffs) c *= s;
  return r;
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  const UPoly bt = b.trimmed();
  const int db = bt.degree();
  if (db < 0) throw Error(ErrorCode::invalid_input, "polynomial division by zero");
  std::vector<cplx> rem = a.trimmed().coeffs;
  const int da = static_cast<int>(rem.size()) - 1;
  if (da < db) return {UPoly{0.0}, UPoly(rem.empty() ? std::vector<cplx>{0.0} : rem)};
  std::vector<cplx> quot(static_cast<std::size_t>(da - db) + 1, 0.0);
  const cplx lead = bt.coeffs[static_cast<std::size_t>(db)];
  for (int k = da - db; k >= 0; --k) {
    const cplx q = rem[static_cast<std::size_t>(k + db)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= q * bt.coeffs[static_cast<std::size_t>(j)];
    rem[static_cast<std::size_t>(k + db)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(std::max(db, 1)));
  return {UPoly(std::move(quot)), UPoly(std::move(rem))};
}

std::vector<cplx> roots(const UPoly& p) {
  const UPoly t = p.trimmed();
  const int deg = t.degree();
  if (deg <= 0) return {};
  // Leading zero coefficients at the low end are exact roots at the origin.
  int low = 0;
  while (t.coeffs[static_cast<std::size_t>(low)] == cplx(0.0)) ++low;
  std::vector<cplx> out(static_cast<std::size_t>(low), 0.0);
  const int m = deg - low;
  if (m > 0) {
    const cplx lead = t.coeffs[static_cast<std::size_t>(deg)];
    CMat comp = CMat::Zero(m, m);
    for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) comp(i, m - 1) = -t.coeffs[static_cast<std::size_t>(low + i)] / lead;
    Eigen::ComplexEigenSolver<CMat> solver(comp, false);
    const UPoly dp = t.derivative();
    for (Eigen::Index i = 0; i < m; ++i) {
      cplx r = solver.eigenvalues()(i);
      const cplx d = dp(r);
      if (std::abs(d) > 0.0) {
        const cplx polished = r - t(r) / d;
        if (std::abs(t(polished)) < std::abs(t(r))) r = polished;
      }
      out.push_back(r);
    }
  }
  return out;
}

namespace {

UPoly normalized(const UPoly& p) {
  const double m = p.max_abs();
  return m > 0.0 ? cplx(1.0 / m) * p : p;
}

}  // namespace

UPoly numerical_gcd(std::span<const UPoly> polys, double rel_tol) {
  UPoly g;
  bool have = false;
  for (const UPoly& raw : polys) {
    UPoly b = normalized(raw.trimmed(rel_tol));
    if (b.degree() < 0) continue;
    if (!have) {
      g = b;
      have = true;
      continue;
    }
    UPoly a = g;
    if (a.degree() < b.degree()) std::swap(a, b);
    while (b.degree() >= 0) {
      if (b.degree() == 0) {
        a = UPoly{1.0};
        break;
      }
      UPoly r = divmod(a, b).second;
      a = b;
      // The remainder is compared against the divisor, which has unit max-norm.
      if (r.max_abs() <= rel_tol) break;
      b = normalized(r.trimmed(rel_tol));
    }
    g = normalized(a.trimmed(rel_tol));
  }
  if (!have) return UPoly{};
  const int d = g.degree();
  return cplx(1.0) / g.coeffs[static_cast<std::size_t>(d)] * g;
}

}  // namespace hullscope
