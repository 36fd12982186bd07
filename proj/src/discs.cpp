#include "hullscope/discs.hpp"

#include <tuple>

#include <algorithm>
#include <cmath>
#include <limits>

#include "hullscope/rng.hpp"

namespace hullscope {

int Divisor::total_multiplicity() const {
  int s = 0;
  for (const DivisorPoint& p : points) s += p.multiplicity;
  return s;
}

void validate(const Divisor& d, double boundary_margin) {
  for (const DivisorPoint& p : d.points) {
    if (p.multiplicity < 1) throw Error(ErrorCode::invalid_input, "divisor multiplicity below 1");
    if (!(std::abs(p.point) < 1.0 - boundary_margin))
      throw Error(ErrorCode::boundary_contact, "divisor point too close to the unit circle");
  }
}

namespace {

UPoly pairing(const RationalDisc& f, const CVec& lambda) {
  if (lambda.size() != f.size())
    throw Error(ErrorCode::dimension_mismatch, "hyperplane and disc have different lengths");
  UPoly g{0.0};
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    g = g + lambda(i) * f.components[static_cast<std::size_t>(i)];
  return g;
}

}  // namespace

Divisor hyperplane_divisor(const RationalDisc& f, const CVec& lambda, const DiscOptions& opts) {
  if (lambda.norm() == 0.0) throw Error(ErrorCode::invalid_input, "hyperplane coefficients are all zero");
  const UPoly g = pairing(f, lambda);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    scale = std::max(scale, std::abs(lambda(i)) * f.components[static_cast<std::size_t>(i)].max_abs());
  if (g.max_abs() <= 1e-14 * scale)
    throw Error(ErrorCode::disc_in_hyperplane, "disc is contained in the hyperplane");

  std::vector<cplx> inside;
  for (const cplx r : roots(g.trimmed(1e-14))) {
    const double a = std::abs(r);
    if (a < 1.0 - opts.boundary_margin) {
      inside.push_back(r);
    } else if (a <= 1.0 + opts.boundary_margin) {
      throw Error(ErrorCode::boundary_contact, "disc meets the hyperplane on or near the unit circle");
    }
  }

  // Agglomerative clustering. The eigenvalues of an exact m-fold root a
  // scatter by about rho_m = (u |g|_1 m! / |g^(m)(a)|)^(1/m), u the backward
  // error of the eigenvalue solve (taken generously); groups merge when the
  // merged group fits in rho_m or in the fixed floor cluster_tol.
  const UPoly gt = g.trimmed(1e-14);
  std::vector<UPoly> deriv{gt};
  for (int k = 1; k <= gt.degree(); ++k) deriv.push_back(deriv.back().derivative());
  const double unit = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1, gt.degree());
  const double l1 = gt.l1_norm();
  auto scatter = [&](cplx a, int m) {
    double fact = 1.0;
    for (int k = 2; k <= m; ++k) fact *= k;
    const double dm = std::abs(deriv[static_cast<std::size_t>(m)](a));
    if (dm == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(unit * l1 * fact / dm, 1.0 / m);
  };

  std::vector<std::vector<cplx>> groups;
  for (const cplx r : inside) groups.push_back({r});
  auto mean = [](const std::vector<cplx>& v) {
    cplx s = 0.0;
    for (const cplx x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  for (bool merged = true; merged;) {
    merged = false;
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < groups.size(); ++i)
      for (std::size_t j = i + 1; j < groups.size(); ++j)
        pairs.emplace_back(std::abs(mean(groups[i]) - mean(groups[j])), i, j);
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [dist, i, j] : pairs) {
      std::vector<cplx> u = groups[i];
      u.insert(u.end(), groups[j].begin(), groups[j].end());
      const cplx a = mean(u);
      double spread = 0.0;
      for (const cplx x : u) spread = std::max(spread, std::abs(x - a));
      const int m = static_cast<int>(u.size());
      if (spread <= opts.cluster_tol || (m <= gt.degree() && spread <= scatter(a, m))) {
        groups[i] = std::move(u);
        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
        break;
      }
    }
  }

  Divisor d;
  for (const auto& grp : groups) {
    const int m = static_cast<int>(grp.size());
    cplx a = mean(grp);
    if (m > 1) {
      // a is a simple root of g^(m-1); polish it there
      const UPoly& p = deriv[static_cast<std::size_t>(m - 1)];
      const UPoly& dp = deriv[static_cast<std::size_t>(m)];
      for (int it = 0; it < 3; ++it) {
        const cplx step = p(a) / dp(a);
        if (!std::isfinite(std::abs(step)) || std::abs(p(a - step)) >= std::abs(p(a))) break;
        a -= step;
      }
    }
    d.points.push_back({a, m});
  }
  std::sort(d.points.begin(), d.points.end(), [](const DivisorPoint& a, const DivisorPoint& b) {
    if (std::abs(a.point) != std::abs(b.point)) return std::abs(a.point) < std::abs(b.point);
    return std::arg(a.point) < std::arg(b.point);
  });
  return d;
}

double j_functional(const Divisor& d, const DiscOptions& opts) {
  double j = 0.0;
  for (const DivisorPoint& p : d.points) {
    if (std::abs(p.point) < opts.origin_tol) return std::numeric_limits<double>::infinity();
    j -= p.multiplicity * std::log(std::abs(p.point));
  }
  return j;
}

double j_functional(const RationalDisc& f, const CVec& lambda, const DiscOptions& opts) {
  return j_functional(hyperplane_divisor(f, lambda, opts), opts);
}

cplx BlaschkeProduct::operator()(cplx zeta) const {
  cplx v = rotation;
  for (const DivisorPoint& p : zeros.points) {
    const cplx factor = (zeta - p.point) / (1.0 - std::conj(p.point) * zeta);
    for (int k = 0; k < p.multiplicity; ++k) v *= factor;
  }
  return v;
}

BlaschkeProduct blaschke_from_divisor(const Divisor& d) {
  validate(d);
  return BlaschkeProduct{d, 1.0};
}

CVec chart_value(const RationalDisc& g, const CVec& lambda, AffineChart chart, cplx zeta) {
  const CVec p = g.numerators(zeta);
  const cplx denom = lambda.cwiseProduct(p).sum();
  CVec w(p.size() - 1);
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (i != chart.dropped) w(j++) = p(i) / denom;
  return w;
}

PoleCancellation cancel_poles(const RationalDisc& g, const CVec& lambda, AffineChart chart,
                              const DiscOptions& opts) {
  if (g.mode != Mode::projective) throw Error(ErrorCode::invalid_input, "cancel_poles expects a disc into P^n");
  if (lambda.size() != g.size()) throw Error(ErrorCode::dimension_mismatch, "hyperplane and disc have different lengths");
  if (chart.dropped < 0 || chart.dropped >= g.size() || lambda(chart.dropped) == cplx(0.0))
    throw Error(ErrorCode::invalid_input, "chart coordinates do not form a chart of the hyperplane complement");
  validate(g);

  PoleCancellation out;
  out.divisor = hyperplane_divisor(g, lambda, opts);
  out.j = j_functional(out.divisor, opts);
  if (!std::isfinite(out.j)) throw Error(ErrorCode::infinite_j, "disc center lies on the hyperplane");
  out.blaschke = blaschke_from_divisor(out.divisor);

  // F = P / (B(0) * q * prod (1 - conj(a) zeta)^m), where g = q * prod (zeta - a)^m.
  UPoly g_poly = pairing(g, lambda).trimmed(1e-14);
  UPoly inner{1.0}, reflected{1.0};
  for (const DivisorPoint& p : out.divisor.points)
    for (int k = 0; k < p.multiplicity; ++k) {
      inner = inner * UPoly{-p.point, 1.0};
      reflected = reflected * UPoly{1.0, -std::conj(p.point)};
    }
  const auto [q, rem] = divmod(g_poly, inner);
  if (rem.max_abs() > 1e-8 * g_poly.max_abs())
    throw Error(ErrorCode::numerical_cancellation, "divisor does not divide the hyperplane pairing");
  const UPoly denom = out.blaschke.at_zero() * (q * reflected);
  for (const cplx r : roots(denom))
    if (std::abs(r) <= 1.0 + opts.boundary_margin)
      throw Error(ErrorCode::numerical_cancellation, "cancelled disc keeps a pole on the closed disc");

  std::vector<UPoly> numer;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (i != chart.dropped) numer.push_back(g.components[static_cast<std::size_t>(i)]);
  if (!common_zeros_in_closed_disc(numer, 1e-10, 1e-8).empty())
    throw Error(ErrorCode::numerical_cancellation, "cancelled disc passes through the chart origin");
  out.disc = RationalDisc::affine(std::move(numer), denom);
  return out;
}

CVec disc_point_in(const RationalDisc& f, const SampledCompact& k, cplx zeta) {
  const Eigen::Index len = k.points.front().size();
  if (f.mode == Mode::projective && k.mode == Mode::affine) {
    if (f.size() != len + 1) throw Error(ErrorCode::dimension_mismatch, "disc and sample dimensions differ");
    const CVec p = f.numerators(zeta);
    if (p(0) == cplx(0.0)) return CVec::Constant(len, std::numeric_limits<double>::infinity());
    return p.tail(len) / p(0);
  }
  if (f.size() != len) throw Error(ErrorCode::dimension_mismatch, "disc and sample dimensions differ");
  return f(zeta);
}

double poletsky_measure(const RationalDisc& f, const NearestSample& index, double eps, int m) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_input, "poletsky_measure needs eps > 0");
  if (m < 16) throw Error(ErrorCode::invalid_input, "poletsky_measure needs at least 16 nodes");
  int hits = 0;
  for (const cplx z : circle_nodes(m)) {
    const CVec p = disc_point_in(f, index.compact(), z);
    if (p.allFinite() && index.distance(p) < eps) ++hits;
  }
  return kTwoPi * (static_cast<double>(hits) / static_cast<double>(m));
}

double poletsky_measure(const RationalDisc& f, const SampledCompact& k, double eps, int m) {
  return poletsky_measure(f, NearestSample(k), eps, m);
}

PoissonValue poisson_functional(const std::function<double(const CVec&)>& u, const RationalDisc& f, int m) {
  if (m < 1) throw Error(ErrorCode::invalid_input, "poisson_functional needs at least one node");
  PoissonValue out;
  double sum = 0.0;
  int used = 0;
  for (const cplx z : circle_nodes(m)) {
    const CVec p = f.mode == Mode::affine ? f(z) : project(f.numerators(z)).rep;
    const double v = u(p);
    if (v == -std::numeric_limits<double>::infinity()) {
      ++out.dropped;
      continue;
    }
    sum += v;
    ++used;
  }
  out.value = used > 0 ? sum / used : -std::numeric_limits<double>::infinity();
  return out;
}

Nudge general_position_nudge(const RationalDisc& f, std::uint64_t seed) {
  if (f.mode != Mode::affine) throw Error(ErrorCode::invalid_input, "nudge applies to discs into C^{n+1}");
  Nudge out{f, CVec::Zero(f.size()), false};
  if (common_zeros_in_closed_disc(f.components).empty()) return out;
  Rng rng(seed);
  CVec dir(f.size());
  for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = rng.complex_normal();
  dir.normalize();
  out.perturbation = 1e-8 * dir;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    UPoly& c = out.disc.components[static_cast<std::size_t>(i)];
    if (c.coeffs.empty()) c.coeffs.push_back(0.0);
    c.coeffs[0] += out.perturbation(i);
  }
  out.applied = true;
  return out;
}

}  // namespace hullscope
