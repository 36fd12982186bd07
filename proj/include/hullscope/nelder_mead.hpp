#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hullscope {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2) started from an axis-aligned simplex of edge `step`.
/// Stops after max_evals evaluations or when the simplex values spread less
/// than ftol (absolute).
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, double step, int max_evals,
                             double ftol = 1e-12);

}  // namespace hullscope
