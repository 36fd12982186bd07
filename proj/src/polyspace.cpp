#include "hullscope/polyspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace hullscope {

namespace {

void fill_basis(int remaining, std::size_t pos, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (pos + 1 == current.size()) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    current[pos] = k;
    fill_basis(remaining - k, pos + 1, current, out);
  }
}

// Row-wise monomial values; powers are tabulated once per point.
CMat vandermonde(std::span<const CVec> points, const std::vector<MultiIndex>& basis, int d) {
  const auto m = static_cast<Eigen::Index>(points.size());
  const auto nb = static_cast<Eigen::Index>(basis.size());
  CMat v(m, nb);
  for (Eigen::Index i = 0; i < m; ++i) {
    const CVec& z = points[static_cast<std::size_t>(i)];
    CMat pw(z.size(), d + 1);
    for (Eigen::Index c = 0; c < z.size(); ++c) {
      pw(c, 0) = 1.0;
      for (int k = 1; k <= d; ++k) pw(c, k) = pw(c, k - 1) * z(c);
    }
    for (Eigen::Index j = 0; j < nb; ++j) {
      cplx term = 1.0;
      const MultiIndex& a = basis[static_cast<std::size_t>(j)];
      for (std::size_t c = 0; c < a.size(); ++c) term *= pw(static_cast<Eigen::Index>(c), a[c]);
      v(i, j) = term;
    }
  }
  return v;
}

HomPoly to_hompoly(int n, int d, const std::vector<MultiIndex>& basis, const CVec& c) {
  HomPoly p{n, d, {}};
  for (std::size_t j = 0; j < basis.size(); ++j) p.coeffs[basis[j]] = c(static_cast<Eigen::Index>(j));
  return p;
}

}  // namespace

std::vector<MultiIndex> monomial_basis(int n, int d) {
  if (n < 1 || d < 0) throw Error(ErrorCode::invalid_input, "monomial_basis needs n >= 1 and d >= 0");
  std::vector<MultiIndex> out;
  out.reserve(basis_size(n, d));
  MultiIndex current(static_cast<std::size_t>(n) + 1, 0);
  fill_basis(d, 0, current, out);
  return out;
}

std::size_t basis_size(int n, int d) {
  // binomial(n + d, n) built incrementally; every partial product is integral.
  std::size_t b = 1;
  for (int k = 1; k <= n; ++k) b = b * static_cast<std::size_t>(d + k) / static_cast<std::size_t>(k);
  return b;
}

cplx HomPoly::operator()(const CVec& z) const {
  if (z.size() != n + 1) throw Error(ErrorCode::dimension_mismatch, "HomPoly evaluated at a point of the wrong length");
  cplx acc = 0.0;
  for (const auto& [alpha, c] : coeffs) {
    cplx term = c;
    for (std::size_t i = 0; i < alpha.size(); ++i)
      for (int k = 0; k < alpha[i]; ++k) term *= z(static_cast<Eigen::Index>(i));
    acc += term;
  }
  return acc;
}

void validate(const HomPoly& p) {
  for (const auto& [alpha, c] : p.coeffs) {
    if (alpha.size() != static_cast<std::size_t>(p.n) + 1)
      throw Error(ErrorCode::dimension_mismatch, "multi-index length differs from n+1");
    int total = 0;
    for (const int a : alpha) {
      if (a < 0) throw Error(ErrorCode::invalid_input, "negative exponent");
      total += a;
    }
    if (total != p.d) throw Error(ErrorCode::invalid_input, "multi-index of the wrong total degree");
  }
}

double section_norm(const HomPoly& p, const ProjectivePoint& x) {
  if (x.rep.size() != p.n + 1) throw Error(ErrorCode::dimension_mismatch, "section_norm: dimension mismatch");
  return std::abs(p(x.rep));
}

double witness_ratio(const HomPoly& p, std::span<const CVec> samples, const CVec& target) {
  double sup = 0.0;
  for (const CVec& s : samples) sup = std::max(sup, std::abs(p(s)));
  const double top = std::abs(p(target));
  if (sup == 0.0) return top > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return top / sup;
}

ChebyshevSolution solve_chebyshev(std::span<const CVec> samples, const CVec& target, int degree,
                                  const SolverConfig& config) {
  if (samples.empty()) throw Error(ErrorCode::invalid_input, "Chebyshev problem without samples");
  if (degree < 0) throw Error(ErrorCode::invalid_input, "negative degree");
  const int n = static_cast<int>(target.size()) - 1;
  for (const CVec& s : samples)
    if (s.size() != target.size()) throw Error(ErrorCode::dimension_mismatch, "sample and target lengths differ");

  const std::vector<MultiIndex> basis = monomial_basis(n, degree);
  const auto nb = static_cast<Eigen::Index>(basis.size());
  const auto m = static_cast<Eigen::Index>(samples.size());

  CMat v = vandermonde(samples, basis, degree);
  CVec vt = vandermonde(std::span<const CVec>(&target, 1), basis, degree).row(0).transpose();

  Eigen::VectorXd scale(nb);
  for (Eigen::Index j = 0; j < nb; ++j) {
    const double s = v.col(j).norm();
    scale(j) = s > 0.0 ? s : 1.0;
    v.col(j) /= scale(j);
  }

  ChebyshevSolution out;
  out.flags.rank_deficient = m < nb;

  const Eigen::BDCSVD<CMat> svd(v, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sig = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sig.size() && sig(rank) > config.rank_tol * sig(0)) ++rank;
  if (rank < nb) out.flags.rank_deficient = true;

  const CMat& w = svd.matrixV();
  const CVec scaled_target = vt.cwiseQuotient(scale.cast<cplx>());
  const CVec proj = w.transpose() * scaled_target;

  auto finish = [&](const CVec& scaled_coeffs) {
    const CVec c = scaled_coeffs.cwiseQuotient(scale.cast<cplx>());
    out.witness = to_hompoly(n, degree, basis, c);
    out.ratio = witness_ratio(out.witness, samples, target);
    return out;
  };

  const Eigen::Index nullity = nb - rank;
  if (rank == 0 || (nullity > 0 && proj.tail(nullity).norm() > 1e-8 * proj.norm())) {
    // Some polynomial vanishes on the sample but not at the target.
    out.flags.unbounded = true;
    const CVec tail = proj.tail(nullity);
    CVec beta = CVec::Zero(nb);
    beta.tail(nullity) = tail.conjugate() / tail.squaredNorm();
    return finish(w * beta);
  }

  const CVec g = proj.head(rank).cwiseQuotient(sig.head(rank).cast<cplx>());
  const CVec s0 = g.conjugate() / g.squaredNorm();
  const CMat u = svd.matrixU().leftCols(rank);
  const CVec a = u * s0;

  CMat z(rank, rank - 1);
  if (rank > 1) {
    const Eigen::HouseholderQR<CMat> qr(CMat(g.conjugate()));
    z = CMat(qr.householderQ()).rightCols(rank - 1);
  }
  const CMat b = u * z;

  Eigen::VectorXd weights = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  CVec tau = CVec::Zero(rank - 1);
  CVec best_tau = tau;
  double best_upper = std::numeric_limits<double>::infinity();
  double prev_lower = 0.0;
  bool converged = rank == 1;
  int it = 0;

  if (rank == 1) {
    best_upper = a.cwiseAbs().maxCoeff();
    out.lower = best_upper;
  }

  std::vector<Eigen::Index> active;
  while (!converged && it < config.max_iterations) {
    ++it;
    active.clear();
    const double wmax = weights.maxCoeff();
    for (Eigen::Index i = 0; i < m; ++i)
      if (weights(i) > 1e-15 * wmax) active.push_back(i);

    const auto na = static_cast<Eigen::Index>(active.size());
    CMat bw(na, rank - 1);
    CVec aw(na);
    for (Eigen::Index r = 0; r < na; ++r) {
      const double sw = std::sqrt(weights(active[static_cast<std::size_t>(r)]));
      bw.row(r) = sw * b.row(active[static_cast<std::size_t>(r)]);
      aw(r) = sw * a(active[static_cast<std::size_t>(r)]);
    }
    CMat gram = CMat::Zero(rank - 1, rank - 1);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(bw.adjoint());
    const CVec rhs = -(bw.adjoint() * aw);
    tau = gram.selfadjointView<Eigen::Lower>().ldlt().solve(rhs);
    if (!tau.allFinite()) tau = gram.completeOrthogonalDecomposition().solve(rhs);

    const Eigen::VectorXd err = (a + b * tau).cwiseAbs();
    const double upper = err.maxCoeff();
    const double lower = std::sqrt(weights.dot(err.cwiseAbs2()));
    if (upper < best_upper) {
      best_upper = upper;
      best_tau = tau;
    }
    out.lower = std::max(out.lower, lower);
    if (upper - lower <= config.tolerance * upper) converged = true;
    if (it > 1 && std::abs(lower - prev_lower) <= config.tolerance * lower) converged = true;
    prev_lower = lower;

    weights = weights.cwiseProduct(err);
    const double total = weights.sum();
    if (!(total > 0.0)) break;
    weights /= total;
  }

  out.iterations = it;
  out.upper = best_upper;
  out.flags.not_converged = !converged;
  const CVec s = s0 + z * best_tau;
  const CVec coeff_scaled = w.leftCols(rank) * s.cwiseQuotient(sig.head(rank).cast<cplx>());
  return finish(coeff_scaled);
}

namespace {

HomPoly power_of_linear_form(const CVec& x, int d) {
  // (conj(x) . z)^d expanded over the monomial basis.
  const int n = static_cast<int>(x.size()) - 1;
  HomPoly p{n, d, {}};
  for (const MultiIndex& a : monomial_basis(n, d)) {
    double multinom = std::tgamma(d + 1.0);
    cplx c = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      multinom /= std::tgamma(a[i] + 1.0);
      for (int k = 0; k < a[i]; ++k) c *= std::conj(x(static_cast<Eigen::Index>(i)));
    }
    p.coeffs[a] = multinom * c;
  }
  return p;
}

CVec homogenize(const CVec& w) {
  CVec z(w.size() + 1);
  z(0) = 1.0;
  z.tail(w.size()) = w;
  return z;
}

}  // namespace

DegreeResult chebyshev_ratio(const SampledCompact& k, const ProjectivePoint& x, int degree,
                             const SolverConfig& config) {
  if (k.mode != Mode::projective) throw Error(ErrorCode::invalid_input, "chebyshev_ratio expects a projective sample");
  if (degree < 1) throw Error(ErrorCode::invalid_input, "degree must be at least 1");
  if (x.rep.size() != k.points.front().size())
    throw Error(ErrorCode::dimension_mismatch, "query point and sample live in different P^n");

  DegreeResult r;
  r.degree = degree;
  if (NearestSample(k).distance(x.rep) <= k.resolution) {
    r.flags.in_sample = true;
    r.value = 1.0;
    r.witness = power_of_linear_form(x.rep, degree);
    return r;
  }
  ChebyshevSolution sol = solve_chebyshev(k.points, x.rep, degree, config);
  r.flags = sol.flags;
  r.iterations = sol.iterations;
  // (conj(x) . z)^d certifies C_d >= 1; keep it if the solver did worse.
  HomPoly linear = power_of_linear_form(x.rep, degree);
  const double linear_ratio = witness_ratio(linear, k.points, x.rep);
  if (linear_ratio > sol.ratio) {
    sol.ratio = linear_ratio;
    sol.witness = std::move(linear);
  }
  r.value = std::pow(sol.ratio, 1.0 / degree);
  r.witness = std::move(sol.witness);
  return r;
}

BestConstantTrace best_constant(const SampledCompact& k, const ProjectivePoint& x, int dmax,
                                const SolverConfig& config) {
  if (dmax < 1) throw Error(ErrorCode::invalid_input, "dmax must be at least 1");
  BestConstantTrace t;
  t.x = x;
  double running = 1.0;
  for (int d = 1; d <= dmax; ++d) {
    DegreeResult r = chebyshev_ratio(k, x, d, config);
    running = std::max(running, r.value);
    t.degrees.push_back(d);
    t.values.push_back(r.value);
    t.cumulative.push_back(running);
    t.flags.push_back(r.flags);
    t.witnesses.push_back(std::move(r.witness));
  }
  t.radius = 1.0 / running;
  return t;
}

ExtremalSample affine_extremal(const SampledCompact& k, const CVec& z, int dmax,
                               const SolverConfig& config) {
  if (k.mode != Mode::affine) throw Error(ErrorCode::invalid_input, "affine_extremal expects an affine sample");
  if (dmax < 1) throw Error(ErrorCode::invalid_input, "dmax must be at least 1");
  if (z.size() != k.points.front().size())
    throw Error(ErrorCode::dimension_mismatch, "query point and sample live in different C^n");
  if (!z.allFinite()) throw Error(ErrorCode::invalid_input, "query point is not finite");

  ExtremalSample out;
  out.z = z;
  const bool in_sample = NearestSample(k).distance(z) <= k.resolution;
  std::vector<CVec> lifted;
  if (!in_sample) {
    lifted.reserve(k.points.size());
    for (const CVec& p : k.points) lifted.push_back(homogenize(p));
  }
  const CVec target = homogenize(z);
  double running = 0.0;
  for (int d = 1; d <= dmax; ++d) {
    double v = 0.0;
    SolveFlags flags;
    HomPoly witness;
    // The constant polynomial z_0^d certifies V_d >= 0.
    witness = HomPoly{static_cast<int>(z.size()), d, {}};
    witness.coeffs[monomial_basis(static_cast<int>(z.size()), d).front()] = 1.0;
    if (in_sample) {
      flags.in_sample = true;
    } else {
      ChebyshevSolution sol = solve_chebyshev(lifted, target, d, config);
      flags = sol.flags;
      if (sol.ratio > 1.0) {
        v = std::log(sol.ratio) / d;
        witness = std::move(sol.witness);
      }
    }
    running = std::max(running, v);
    out.degrees.push_back(d);
    out.v_values.push_back(v);
    out.cumulative.push_back(running);
    out.flags.push_back(flags);
    out.witnesses.push_back(std::move(witness));
  }
  out.finite = out.cumulative.back() <= config.cap;
  return out;
}

double lift_potential(const std::function<double(const CVec&)>& v, const CVec& z) {
  if (z.size() < 2) throw Error(ErrorCode::invalid_input, "lift_potential needs a vector in C^{n+1}, n >= 1");
  const cplx z0 = z(0);
  if (z0 == cplx(0.0)) return -std::numeric_limits<double>::infinity();
  const CVec w = z.tail(z.size() - 1) / z0;
  return std::log(std::abs(z0)) + v(w);
}

}  // namespace hullscope
