#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hullscope/discs.hpp"
#include "hullscope/polyspace.hpp"
#include "hullscope/projgeom.hpp"

namespace hullscope {

enum class HullLabel { in_hull, growing, flagged };

std::string_view to_string(HullLabel label);

/// One grid point of a hull field. For projective samples `values` holds C_d;
/// for affine samples it holds V_d.
struct HullPoint {
  CVec point;
  std::vector<int> degrees;
  std::vector<double> values;
  std::vector<double> cumulative;
  std::vector<SolveFlags> flags;
  /// Least-squares slope of d -> log of the d-th ratio over the last quartile.
  double growth_slope = 0.0;
  HullLabel label = HullLabel::flagged;
  /// Finite best constant (projective) or V <= cap (affine) at this budget.
  bool projective_finite = false;
};

struct HullField {
  Mode mode = Mode::projective;
  std::vector<HullPoint> points;
  int dmax = 0;
  double cap = 0.0;
  double growth_threshold = 0.0;
};

/// Thread count from HULLSCOPE_THREADS, else the hardware concurrency.
int default_thread_count();

/// log of the d-th ratio: d log C_d or d V_d.
double growth_slope(std::span<const int> degrees, std::span<const double> log_ratio);

/// The label is a pure function of the trace and the budget:
///  projective: in-hull iff cumulative log C <= cap, else growing iff the slope
///              exceeds the threshold, else flagged.
///  affine:     growing iff the slope exceeds the threshold, flagged when a degree
///              came out unbounded, else in-hull (polynomial hull at this budget);
///              projective_finite records cumulative V <= cap separately.
void label_point(HullPoint& pt, Mode mode, double cap, double threshold);

/// Grid points are representatives in C^{n+1} for projective samples and
/// points of C^n for affine ones. Points are processed in parallel; results
/// do not depend on the thread count.
HullField classify_hull(const SampledCompact& k, std::span<const CVec> grid, int dmax,
                        const SolverConfig& config = {}, int threads = 0);

struct SearchConfig {
  std::uint64_t seed = 0;
  int restarts = 8;
  /// Objective evaluations per restart.
  int iterations = 3000;
  /// Quadrature nodes used inside the optimizer.
  int nodes = 128;
  /// Fresh quadrature used for the reported boundary distance.
  int verify_nodes = 1024;
  /// Initial boundary-penalty weight; doubled each restart until feasible.
  double penalty = 10.0;
};

struct Improvement {
  int restart = 0;
  int evaluation = 0;
  double objective = 0.0;
  double j = 0.0;
  double distance = 0.0;
};

struct DiscSearchResult {
  RationalDisc disc;
  double j = 0.0;
  /// max over fresh quadrature nodes of the distance to the nearest sample.
  double boundary_distance = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  int degree_budget = 0;
  /// Zero penalty at every optimizer node; boundary_distance may still exceed
  /// the margin between nodes.
  bool feasible = false;
  /// disc_search_boundary only: whether K carried the circular and connected flags.
  bool hypotheses_met = true;
  std::vector<Improvement> history;
};

/// Approximates V_Omega(p) = inf J(f) over discs [q : N_1 : ... : N_n] with
/// f(0) = p and boundary within `margin` of the sample. The hyperplane must be
/// the one at infinity, z_0 = 0, of the sample's chart.
DiscSearchResult disc_search_envelope(const SampledCompact& omega, double margin, const CVec& p,
                                      int degree, const CVec& hyperplane, const SearchConfig& config = {});

/// Minimizes max_t dist(f(e^{it}), K) over discs holomorphic on the closed disc
/// (poles outside it) with f(0) = p. Failure to descend is evidence, not proof.
DiscSearchResult disc_search_boundary(const SampledCompact& k, const CVec& p, int degree,
                                      const SearchConfig& config = {});

struct DiscCheck {
  int index = 0;
  double epsilon = 0.0;
  double center_error = 0.0;
  double center_threshold = 1e-9;
  bool center_ok = false;
  double measure = 0.0;
  double measure_threshold = 0.0;  ///< 2 pi - epsilon
  bool measure_ok = false;
  double boundary_max = 0.0;
  double blp = 0.0;
  double j = 0.0;  ///< w.r.t. z_0 = 0; NaN when undefined
};

struct CertificateReport {
  std::vector<DiscCheck> discs;
  /// sup over the sequence of the lift ratio max|F_j| / |F_j(0)|.
  double blp_constant = 0.0;
  bool centers_ok = false;
  bool measures_ok = false;
  bool blp_finite = false;
};

/// Checks the P-sequence conditions disc by disc against the schedule
/// eps_j and reports the bounded-lifting constant of the lifts.
CertificateReport verify_psequence(std::span<const RationalDisc> discs, const SampledCompact& k,
                                   const CVec& x, std::span<const double> schedule, int m = 1024);

}  // namespace hullscope
