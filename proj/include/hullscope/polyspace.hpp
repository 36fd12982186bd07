#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "hullscope/projgeom.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

using MultiIndex = std::vector<int>;

/// All exponent vectors of length n+1 and total degree d, in graded
/// lexicographic order: (d,0,..,0) first, (0,..,0,d) last.
std::vector<MultiIndex> monomial_basis(int n, int d);

/// binomial(n + d, n)
std::size_t basis_size(int n, int d);

/// Homogeneous polynomial of degree d in the n+1 variables z_0..z_n.
struct HomPoly {
  int n = 1;
  int d = 0;
  std::map<MultiIndex, cplx> coeffs;

  cplx operator()(const CVec& z) const;

  friend bool operator==(const HomPoly&, const HomPoly&) = default;
};

/// Every stored multi-index has length n+1 and total degree d.
void validate(const HomPoly& p);

/// |P(x.rep)|, i.e. |P(z)| / |z|^d for any representative z of x.
double section_norm(const HomPoly& p, const ProjectivePoint& x);

struct SolverConfig {
  int max_iterations = 500;
  double tolerance = 1e-8;
  /// Finiteness threshold on cumulative log C or V.
  double cap = std::log(1e3);
  /// Singular values below rank_tol * sigma_max count as rank loss.
  double rank_tol = 1e-11;
  /// Slope of d * log C_d over the last quartile above which a point is "growing".
  double growth_slope = 0.02;
};

struct SolveFlags {
  bool in_sample = false;
  bool rank_deficient = false;
  bool unbounded = false;
  bool not_converged = false;

  bool warning() const { return rank_deficient || unbounded || not_converged; }
  friend bool operator==(const SolveFlags&, const SolveFlags&) = default;
};

/// Outcome of max |P(target)| subject to max_i |P(sample_i)| <= 1 over
/// homogeneous P of one degree. `ratio` is always recomputed from `witness`.
struct ChebyshevSolution {
  double ratio = 1.0;
  HomPoly witness;
  SolveFlags flags;
  int iterations = 0;
  /// Lawson lower bound and best upper bound of min max_i |P(sample_i)|
  /// under P(target) = 1.
  double lower = 0.0;
  double upper = 0.0;
};

/// |P(target)| / max_i |P(sample_i)|, evaluated directly in the monomial basis.
double witness_ratio(const HomPoly& p, std::span<const CVec> samples, const CVec& target);

/// Lawson iteration on min max_i |P(sample_i)| subject to P(target) = 1.
/// The Vandermonde matrix is orthonormalized by an SVD first; the constraint
/// is eliminated by substitution.
ChebyshevSolution solve_chebyshev(std::span<const CVec> samples, const CVec& target, int degree,
                                  const SolverConfig& config = {});

/// One degree of a best-constant or extremal-function trace.
struct DegreeResult {
  int degree = 0;
  double value = 1.0;
  SolveFlags flags;
  HomPoly witness;
  int iterations = 0;
};

/// C_d(x) for a projective sample. Returns 1 when x is within the sample
/// resolution of K.
DegreeResult chebyshev_ratio(const SampledCompact& k, const ProjectivePoint& x, int degree,
                             const SolverConfig& config = {});

/// Degree-truncated best constant function. All values are certified lower
/// bounds for the sample.
struct BestConstantTrace {
  ProjectivePoint x;
  std::vector<int> degrees;
  std::vector<double> values;
  std::vector<double> cumulative;
  std::vector<SolveFlags> flags;
  std::vector<HomPoly> witnesses;
  /// 1 / cumulative C at the largest degree.
  double radius = 1.0;
};

BestConstantTrace best_constant(const SampledCompact& k, const ProjectivePoint& x, int dmax,
                                const SolverConfig& config = {});

/// Degree-truncated Siciak-Zaharyuta extremal function of an affine sample.
struct ExtremalSample {
  CVec z;
  std::vector<int> degrees;
  std::vector<double> v_values;
  std::vector<double> cumulative;
  std::vector<SolveFlags> flags;
  std::vector<HomPoly> witnesses;
  /// cumulative V at dmax <= cap.
  bool finite = true;
};

/// V_d(z) = (1/d) log sup{|p(z)| : deg p <= d, max_K |p| <= 1}, solved as the
/// homogeneous problem on (1, k) and (1, z).
ExtremalSample affine_extremal(const SampledCompact& k, const CVec& z, int dmax,
                               const SolverConfig& config = {});

/// log|z_0| + v(z_1/z_0, ..., z_n/z_0); -infinity when z_0 = 0.
double lift_potential(const std::function<double(const CVec&)>& v, const CVec& z);

}  // namespace hullscope
