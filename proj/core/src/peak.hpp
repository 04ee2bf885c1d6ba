#pragma once

#include <functional>

#include "edgepost/posterior.hpp"

namespace edgepost::detail {

struct Peak {
  double argmax = 0.0;
  double max_value = 0.0;
  bool at_boundary = false;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double grid_scale = 1.0;  // rough half-width where f drops by 1/2
};

/// Scans f on a grid that is uniform in a support-adapted coordinate
/// (logistic for bounded, log for half-lines, asinh for the line) and
/// returns the bracketed global maximum. Throws NonUnimodalError when
/// more than one significant local maximum is seen.
Peak locate_peak(const std::function<double(double)>& f, const Support& support);

/// Safeguarded Newton on the gradient inside [lo, hi]; bisection whenever the
/// Newton step leaves the bracket or the curvature is not negative.
double refine_maximum(const std::function<double(double)>& grad,
                      const std::function<double(double)>& curv, double lo, double hi,
                      double start, double grad_tol);

}  // namespace edgepost::detail
