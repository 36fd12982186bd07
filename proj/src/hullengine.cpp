#include "hullscope/hullengine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <thread>

#include "hullscope/nelder_mead.hpp"
#include "hullscope/rng.hpp"

namespace hullscope {

std::string_view to_string(HullLabel label) {
  switch (label) {
    case HullLabel::in_hull: return "in-hull-at-budget";
    case HullLabel::growing: return "growing";
    case HullLabel::flagged: return "flagged";
  }
  return "flagged";
}

int default_thread_count() {
  if (const char* env = std::getenv("HULLSCOPE_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double growth_slope(std::span<const int> degrees, std::span<const double> log_ratio) {
  const std::size_t n = degrees.size();
  if (n == 0) return 0.0;
  if (n == 1) return log_ratio[0] / degrees[0];
  const std::size_t start = std::min(3 * n / 4, n - 2);
  double sx = 0.0, sy = 0.0;
  const auto cnt = static_cast<double>(n - start);
  for (std::size_t i = start; i < n; ++i) {
    if (!std::isfinite(log_ratio[i])) return std::numeric_limits<double>::infinity();
    sx += degrees[i];
    sy += log_ratio[i];
  }
  const double mx = sx / cnt, my = sy / cnt;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    sxy += (degrees[i] - mx) * (log_ratio[i] - my);
    sxx += (degrees[i] - mx) * (degrees[i] - mx);
  }
  return sxy / sxx;
}

void label_point(HullPoint& pt, Mode mode, double cap, double threshold) {
  std::vector<double> log_ratio(pt.values.size());
  for (std::size_t i = 0; i < pt.values.size(); ++i)
    log_ratio[i] = mode == Mode::projective ? pt.degrees[i] * std::log(pt.values[i]) : pt.degrees[i] * pt.values[i];
  pt.growth_slope = growth_slope(pt.degrees, log_ratio);
  const bool growing = pt.growth_slope > threshold;
  if (mode == Mode::projective) {
    pt.projective_finite = std::log(pt.cumulative.back()) <= cap;
    pt.label = pt.projective_finite ? HullLabel::in_hull : growing ? HullLabel::growing : HullLabel::flagged;
    return;
  }
  pt.projective_finite = pt.cumulative.back() <= cap;
  // not_converged stays a per-degree warning: V_d is still a certified lower bound,
  // and Lawson stalls routinely on hull points where the optimum is degenerate.
  const bool trouble = std::any_of(pt.flags.begin(), pt.flags.end(), [](const SolveFlags& f) { return f.unbounded; });
  pt.label = growing ? HullLabel::growing : trouble ? HullLabel::flagged : HullLabel::in_hull;
}

HullField classify_hull(const SampledCompact& k, std::span<const CVec> grid, int dmax,
                        const SolverConfig& config, int threads) {
  if (grid.empty()) throw Error(ErrorCode::invalid_input, "classify_hull needs a nonempty grid");
  validate(k);
  HullField field;
  field.mode = k.mode;
  field.dmax = dmax;
  field.cap = config.cap;
  field.growth_threshold = config.growth_slope;
  field.points.resize(grid.size());

  std::vector<std::exception_ptr> errors(grid.size());
  auto compute = [&](std::size_t i) {
    HullPoint& pt = field.points[i];
    pt.point = grid[i];
    if (k.mode == Mode::projective) {
      BestConstantTrace t = best_constant(k, project(grid[i]), dmax, config);
      pt.degrees = std::move(t.degrees);
      pt.values = std::move(t.values);
      pt.cumulative = std::move(t.cumulative);
      pt.flags = std::move(t.flags);
    } else {
      ExtremalSample e = affine_extremal(k, grid[i], dmax, config);
      pt.degrees = std::move(e.degrees);
      pt.values = std::move(e.v_values);
      pt.cumulative = std::move(e.cumulative);
      pt.flags = std::move(e.flags);
    }
    label_point(pt, k.mode, config.cap, config.growth_slope);
  };

  const int nthreads = std::clamp(threads > 0 ? threads : default_thread_count(), 1,
                                  static_cast<int>(grid.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        compute(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return field;
}

namespace {

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  // splitmix64 step on (seed, restart)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Unconstrained (u, v) -> tanh(r) e^{i arg}, a point of the open unit disc.
cplx radial_to_disc(double u, double v) {
  const double r = std::hypot(u, v);
  if (r == 0.0) return 0.0;
  return std::tanh(r) / r * cplx(u, v);
}

std::pair<double, double> disc_to_radial(cplx a) {
  const double m = std::abs(a);
  if (m == 0.0) return {0.0, 0.0};
  const double r = std::atanh(std::min(m, 1.0 - 1e-12));
  return {r * a.real() / m, r * a.imag() / m};
}

double max_abs_coordinate(const SampledCompact& k) {
  double s = 0.0;
  for (const CVec& p : k.points) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

double fresh_boundary_distance(const RationalDisc& f, const NearestSample& index, int m) {
  double worst = 0.0;
  for (const cplx z : circle_nodes(m)) {
    const CVec pt = disc_point_in(f, index.compact(), z);
    worst = std::max(worst, pt.allFinite() ? index.distance(pt) : std::numeric_limits<double>::infinity());
  }
  return worst;
}

RationalDisc projective_form(const RationalDisc& f) {
  if (f.mode == Mode::projective) return f;
  std::vector<UPoly> comps{f.denominator};
  comps.insert(comps.end(), f.components.begin(), f.components.end());
  return RationalDisc::projective(std::move(comps));
}

// Nelder-Mead restarted from its own optimum with a fresh simplex until the
// budget is spent or a restart stops improving; a collapsed simplex is the
// usual failure on these penalized objectives.
void minimize(const std::function<double(std::span<const double>)>& f, std::vector<double> x,
              double step, int budget) {
  double best = std::numeric_limits<double>::infinity();
  int used = 0, stale = 0;
  while (used < budget && stale < 2) {
    NelderMeadResult r = nelder_mead(f, x, step, budget - used);
    used += std::max(r.evaluations, 1);
    if (r.value < best - 1e-12 * std::max(1.0, std::abs(best))) {
      best = r.value;
      x = std::move(r.x);
      stale = 0;
    } else {
      ++stale;
    }
    step = std::max(0.5 * step, 1e-3);
  }
}

CVec infinity_hyperplane(Eigen::Index len) {
  CVec h = CVec::Zero(len);
  h(0) = 1.0;
  return h;
}

// Layout of the envelope-search parameter vector: 2 reals per pole, then
// 2 reals per numerator coefficient of degree 1..deg for each coordinate.
struct EnvelopeLayout {
  int poles = 0;
  int deg = 0;
  Eigen::Index n = 0;

  std::size_t size() const { return static_cast<std::size_t>(2 * poles + 2 * n * deg); }

  std::vector<cplx> pole_points(std::span<const double> x) const {
    std::vector<cplx> a(static_cast<std::size_t>(poles));
    for (int j = 0; j < poles; ++j) a[static_cast<std::size_t>(j)] = radial_to_disc(x[2 * j], x[2 * j + 1]);
    return a;
  }

  RationalDisc disc(std::span<const double> x, const CVec& p) const {
    const std::vector<cplx> a = pole_points(x);
    const UPoly q = UPoly::from_roots(a);
    std::vector<UPoly> comps{q};
    std::size_t off = static_cast<std::size_t>(2 * poles);
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<cplx> c(static_cast<std::size_t>(deg) + 1);
      c[0] = p(i) * q(0.0);
      for (int l = 1; l <= deg; ++l, off += 2) c[static_cast<std::size_t>(l)] = cplx(x[off], x[off + 1]);
      comps.emplace_back(std::move(c));
    }
    return RationalDisc::projective(std::move(comps));
  }
};

}  // namespace

DiscSearchResult disc_search_envelope(const SampledCompact& omega, double margin, const CVec& p,
                                      int degree, const CVec& hyperplane, const SearchConfig& config) {
  if (omega.mode != Mode::affine) throw Error(ErrorCode::invalid_input, "envelope search expects an affine sample");
  validate(omega);
  if (p.size() != omega.dim()) throw Error(ErrorCode::dimension_mismatch, "center and sample dimensions differ");
  if (!p.allFinite()) throw Error(ErrorCode::invalid_input, "center is not finite");
  if (degree < 0) throw Error(ErrorCode::invalid_input, "negative degree budget");
  if (!(margin > 0.0)) throw Error(ErrorCode::invalid_input, "neighbourhood margin must be positive");
  if (hyperplane.size() != p.size() + 1 || hyperplane(0) == cplx(0.0) ||
      hyperplane.tail(p.size()).norm() > 1e-14 * std::abs(hyperplane(0)))
    throw Error(ErrorCode::invalid_input, "envelope search supports only the hyperplane z_0 = 0");

  const NearestSample index(omega);
  const CVec h = infinity_hyperplane(p.size() + 1);
  DiscSearchResult out;
  out.seed = config.seed;
  out.degree_budget = degree;

  if (index.distance(p) <= margin) {
    out.disc = RationalDisc::projective({UPoly{1.0}});
    for (Eigen::Index i = 0; i < p.size(); ++i) out.disc.components.push_back(UPoly{p(i)});
    out.j = 0.0;
    out.boundary_distance = index.distance(p);
    out.feasible = true;
    return out;
  }

  const std::vector<cplx> nodes = circle_nodes(config.nodes);
  const double scale = std::max(max_abs_coordinate(omega), 1e-3);

  double penalty = config.penalty;
  double best_j = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  EnvelopeLayout best_layout;
  std::vector<double> fallback_x;
  EnvelopeLayout fallback_layout;
  double fallback_value = std::numeric_limits<double>::infinity();
  int evaluations = 0;

  for (int r = 0; r < config.restarts; ++r) {
    EnvelopeLayout layout{degree - r % (degree + 1), degree, p.size()};
    Rng rng(restart_seed(config.seed, r));
    std::vector<double> x0(layout.size());
    for (int j = 0; j < layout.poles; ++j) {
      const cplx a = std::polar(rng.uniform(0.2, 0.9), kTwoPi * rng.uniform());
      std::tie(x0[2 * j], x0[2 * j + 1]) = disc_to_radial(a);
    }
    for (std::size_t i = static_cast<std::size_t>(2 * layout.poles); i < x0.size(); ++i)
      x0[i] = 0.5 * scale * rng.normal();

    const double weight = penalty;
    auto objective = [&](std::span<const double> x) {
      ++evaluations;
      double j = 0.0;
      for (const cplx a : layout.pole_points(x)) {
        const double m = std::abs(a);
        if (m < 1e-12 || m > 1.0 - 1e-5) return std::numeric_limits<double>::infinity();
        j -= std::log(m);
      }
      const RationalDisc f = layout.disc(x, p);
      double pen = 0.0, worst = 0.0;
      for (const cplx z : nodes) {
        const CVec pt = disc_point_in(f, omega, z);
        const double d = pt.allFinite() ? index.distance(pt) : std::numeric_limits<double>::infinity();
        worst = std::max(worst, d);
        pen += std::pow(std::max(0.0, d - margin), 2);
      }
      if (!std::isfinite(pen)) return std::numeric_limits<double>::infinity();
      const double value = j + weight * pen;
      if (pen == 0.0 && j < best_j) {
        best_j = j;
        best_x.assign(x.begin(), x.end());
        best_layout = layout;
        out.history.push_back({r, evaluations, value, j, worst});
      }
      if (value < fallback_value) {
        fallback_value = value;
        fallback_x.assign(x.begin(), x.end());
        fallback_layout = layout;
      }
      return value;
    };
    minimize(objective, x0, 0.3, config.iterations);
    if (best_x.empty()) penalty *= 2.0;
  }
  out.iterations = evaluations;

  out.feasible = !best_x.empty();
  const EnvelopeLayout& layout = out.feasible ? best_layout : fallback_layout;
  const std::vector<double>& x = out.feasible ? best_x : fallback_x;
  out.disc = layout.disc(x, p);
  out.j = j_functional(out.disc, h);
  out.boundary_distance = fresh_boundary_distance(out.disc, index, config.verify_nodes);
  return out;
}

namespace {

// Boundary-search parameters: 2 reals per pole c_j (denominator factor
// 1 - c_j zeta, pole at 1/c_j outside the closed disc), then the numerator
// coefficients of degree 1..deg.
struct BoundaryLayout {
  int poles = 0;
  int deg = 0;
  Eigen::Index n = 0;

  std::size_t size() const { return static_cast<std::size_t>(2 * poles + 2 * n * deg); }

  RationalDisc disc(std::span<const double> x, const CVec& p) const {
    UPoly denom{1.0};
    for (int j = 0; j < poles; ++j) denom = denom * UPoly{1.0, -radial_to_disc(x[2 * j], x[2 * j + 1])};
    std::vector<UPoly> comps;
    std::size_t off = static_cast<std::size_t>(2 * poles);
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<cplx> c(static_cast<std::size_t>(deg) + 1);
      c[0] = p(i);
      for (int l = 1; l <= deg; ++l, off += 2) c[static_cast<std::size_t>(l)] = cplx(x[off], x[off + 1]);
      comps.emplace_back(std::move(c));
    }
    return RationalDisc::affine(std::move(comps), std::move(denom));
  }
};

// Starting point built from per-coordinate disc automorphisms
//   f_i = R_i (zeta + a_i) / (1 + conj(a_i) zeta),  a_i = p_i / R_i,
// with R_i the largest modulus of coordinate i over the sample; these map the
// circle onto |z_i| = R_i and are exact for product sets. Coordinates with
// |p_i| >= R_i stay constant. Returns empty when more poles are needed than the
// layout has.
std::vector<double> mobius_seed(const BoundaryLayout& layout, const CVec& p, const CVec& radius) {
  const auto n = static_cast<std::size_t>(p.size());
  std::vector<cplx> a(n, 0.0);
  std::vector<std::size_t> owners;  // coordinates contributing a pole
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radius(static_cast<Eigen::Index>(i)).real();
    const cplx pi = p(static_cast<Eigen::Index>(i));
    if (r > 0.0 && std::abs(pi) < r) a[i] = pi / r;
    if (std::abs(a[i]) > 1e-12) owners.push_back(i);
  }
  if (static_cast<int>(owners.size()) > layout.poles) return {};
  std::vector<double> x(layout.size(), 0.0);
  for (std::size_t j = 0; j < owners.size(); ++j)
    std::tie(x[2 * j], x[2 * j + 1]) = disc_to_radial(-std::conj(a[owners[j]]));
  std::size_t off = static_cast<std::size_t>(2 * layout.poles);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radius(static_cast<Eigen::Index>(i)).real();
    const cplx pi = p(static_cast<Eigen::Index>(i));
    UPoly num = std::abs(pi) < r ? cplx(r) * UPoly{a[i], 1.0} : UPoly{pi};
    for (const std::size_t o : owners)
      if (o != i) num = num * UPoly{1.0, std::conj(a[o])};
    for (int l = 1; l <= layout.deg; ++l, off += 2) {
      const auto ul = static_cast<std::size_t>(l);
      const cplx c = ul < num.coeffs.size() ? num.coeffs[ul] : cplx(0.0);
      x[off] = c.real();
      x[off + 1] = c.imag();
    }
  }
  return x;
}

}  // namespace

DiscSearchResult disc_search_boundary(const SampledCompact& k, const CVec& p, int degree,
                                      const SearchConfig& config) {
  if (k.mode != Mode::affine) throw Error(ErrorCode::invalid_input, "boundary search expects an affine sample");
  validate(k);
  if (p.size() != k.dim()) throw Error(ErrorCode::dimension_mismatch, "center and sample dimensions differ");
  if (!p.allFinite()) throw Error(ErrorCode::invalid_input, "center is not finite");
  if (degree < 1) throw Error(ErrorCode::invalid_input, "boundary search needs degree >= 1");

  const NearestSample index(k);
  const std::vector<cplx> nodes = circle_nodes(config.nodes);
  const double scale = std::max(max_abs_coordinate(k), 1e-3);
  CVec radius = CVec::Zero(k.dim());
  for (const CVec& s : k.points)
    for (Eigen::Index i = 0; i < s.size(); ++i) radius(i) = std::max(radius(i).real(), std::abs(s(i)));

  DiscSearchResult out;
  out.seed = config.seed;
  out.degree_budget = degree;
  out.hypotheses_met = k.circular && k.connected;

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  BoundaryLayout best_layout;
  int evaluations = 0;

  for (int r = 0; r < config.restarts; ++r) {
    BoundaryLayout layout{degree - r % (degree + 1), degree, p.size()};
    Rng rng(restart_seed(config.seed, r));
    std::vector<double> x0(layout.size());
    for (int j = 0; j < layout.poles; ++j) {
      const cplx c = rng.in_disc(0.8);
      std::tie(x0[2 * j], x0[2 * j + 1]) = disc_to_radial(c);
    }
    for (std::size_t i = static_cast<std::size_t>(2 * layout.poles); i < x0.size(); ++i)
      x0[i] = 0.5 * scale * rng.normal();
    if (r == 0)
      if (std::vector<double> seed = mobius_seed(layout, p, radius); !seed.empty()) x0 = std::move(seed);

    auto objective = [&](std::span<const double> x) {
      ++evaluations;
      const RationalDisc f = layout.disc(x, p);
      double worst = 0.0, mean = 0.0;
      for (const cplx z : nodes) {
        const CVec pt = f(z);
        const double d = pt.allFinite() ? index.distance(pt) : std::numeric_limits<double>::infinity();
        worst = std::max(worst, d);
        mean += d;
      }
      mean /= static_cast<double>(nodes.size());
      if (worst < best) {
        best = worst;
        best_x.assign(x.begin(), x.end());
        best_layout = layout;
        out.history.push_back({r, evaluations, worst + 0.1 * mean, 0.0, worst});
      }
      // The mean term smooths the plateaus of the max.
      return worst + 0.1 * mean;
    };
    minimize(objective, x0, 0.3, config.iterations);
  }
  out.iterations = evaluations;
  out.disc = best_layout.disc(best_x, p);
  out.j = j_functional(projective_form(out.disc), infinity_hyperplane(p.size() + 1));
  out.boundary_distance = fresh_boundary_distance(out.disc, index, config.verify_nodes);
  out.feasible = std::isfinite(out.boundary_distance);
  return out;
}

CertificateReport verify_psequence(std::span<const RationalDisc> discs, const SampledCompact& k,
                                   const CVec& x, std::span<const double> schedule, int m) {
  if (discs.size() != schedule.size())
    throw Error(ErrorCode::invalid_input, "schedule length differs from the number of discs");
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    if (!(schedule[j] > 0.0)) throw Error(ErrorCode::invalid_input, "schedule entries must be positive");
    if (j > 0 && !(schedule[j] < schedule[j - 1])) throw Error(ErrorCode::invalid_input, "schedule must decrease");
  }
  validate(k);
  const NearestSample index(k);

  CertificateReport rep;
  rep.centers_ok = rep.measures_ok = true;
  for (std::size_t j = 0; j < discs.size(); ++j) {
    const RationalDisc& f = discs[j];
    DiscCheck c;
    c.index = static_cast<int>(j);
    c.epsilon = schedule[j];

    const CVec center = disc_point_in(f, k, 0.0);
    if (k.mode == Mode::projective) {
      c.center_error = fs_distance(project(center), project(x));
    } else {
      c.center_error = center.allFinite() ? (center - x).norm() : std::numeric_limits<double>::infinity();
    }
    c.center_ok = c.center_error <= c.center_threshold;

    c.measure = poletsky_measure(f, index, c.epsilon, m);
    c.measure_threshold = kTwoPi - c.epsilon;
    c.measure_ok = c.measure > c.measure_threshold;
    c.boundary_max = fresh_boundary_distance(f, index, m);

    const RationalDisc proj = projective_form(f);
    try {
      const RationalDisc lift = lift_disc(proj);
      c.blp = blp_constant(std::span<const RationalDisc>(&lift, 1), m);
    } catch (const Error&) {
      c.blp = std::numeric_limits<double>::infinity();
    }
    try {
      c.j = j_functional(proj, infinity_hyperplane(proj.size()));
    } catch (const Error&) {
      c.j = std::numeric_limits<double>::quiet_NaN();
    }

    rep.centers_ok = rep.centers_ok && c.center_ok;
    rep.measures_ok = rep.measures_ok && c.measure_ok;
    rep.blp_constant = std::max(rep.blp_constant, c.blp);
    rep.discs.push_back(c);
  }
  rep.blp_finite = std::isfinite(rep.blp_constant);
  return rep;
}

}  // namespace hullscope
