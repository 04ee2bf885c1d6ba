#include "peak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "edgepost/errors.hpp"

namespace edgepost::detail {

namespace {

constexpr int kGridPoints = 1441;
constexpr double kGridHalfWidth = 36.0;

double map_to_support(const Support& s, double z) {
  const bool lo_finite = std::isfinite(s.lo);
  const bool hi_finite = std::isfinite(s.hi);
  if (lo_finite && hi_finite) return s.lo + (s.hi - s.lo) / (1.0 + std::exp(-z));
  if (lo_finite) return s.lo + std::exp(z);
  if (hi_finite) return s.hi - std::exp(-z);
  return std::sinh(z);
}

}  // namespace

Peak locate_peak(const std::function<double(double)>& f, const Support& support) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> theta(kGridPoints);
  std::vector<double> value(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    const double z = -kGridHalfWidth + 2.0 * kGridHalfWidth * i / (kGridPoints - 1);
    theta[i] = map_to_support(support, z);
    const double v = support.contains(theta[i]) ? f(theta[i]) : neg_inf;
    value[i] = std::isnan(v) ? neg_inf : v;
  }

  const auto best = std::max_element(value.begin(), value.end());
  if (!std::isfinite(*best)) {
    throw NonUnimodalError("objective is not finite anywhere on the support");
  }
  const double fmax = *best;
  const double tol = 1e-9 * (1.0 + std::abs(fmax));

  // Collapse plateaus, then count local maxima that stand out from the valley
  // separating them from the global maximum.
  struct Run {
    int first, last;
    double v;
  };
  std::vector<Run> runs;
  for (int i = 0; i < kGridPoints; ++i) {
    if (!runs.empty() && value[i] == runs.back().v) {
      runs.back().last = i;
    } else {
      runs.push_back({i, i, value[i]});
    }
  }
  int global = 0;
  for (int r = 0; r < static_cast<int>(runs.size()); ++r) {
    if (runs[r].v == fmax) {
      global = r;
      break;
    }
  }
  int significant = 0;
  for (int r = 0; r < static_cast<int>(runs.size()); ++r) {
    if (!std::isfinite(runs[r].v)) continue;
    const bool left_ok = (r == 0) || runs[r - 1].v < runs[r].v;
    const bool right_ok = (r + 1 == static_cast<int>(runs.size())) || runs[r + 1].v < runs[r].v;
    if (!(left_ok && right_ok)) continue;
    if (r == global) {
      ++significant;
      continue;
    }
    double valley = runs[r].v;
    for (int k = std::min(r, global); k <= std::max(r, global); ++k) valley = std::min(valley, runs[k].v);
    if (runs[r].v - valley > tol) ++significant;
  }
  if (significant > 1) {
    throw NonUnimodalError("objective has " + std::to_string(significant) +
                           " separated local maxima on the support");
  }

  Peak peak;
  const Run& top = runs[static_cast<std::size_t>(global)];
  const int i = top.first;
  peak.argmax = theta[i];
  peak.max_value = fmax;
  // A maximizing run touching the end of the grid, or whose neighbour is an
  // out-of-support point, means the supremum sits at the boundary.
  peak.at_boundary = top.first == 0 || top.last == kGridPoints - 1 ||
                     !std::isfinite(value[top.first - 1]) || !std::isfinite(value[top.last + 1]);
  peak.bracket_lo = theta[std::max(i - 1, 0)];
  peak.bracket_hi = theta[std::min(top.last + 1, kGridPoints - 1)];

  double left = std::numeric_limits<double>::quiet_NaN();
  double right = std::numeric_limits<double>::quiet_NaN();
  for (int k = i; k >= 0; --k) {
    if (value[k] < fmax - 0.5) {
      left = theta[k];
      break;
    }
  }
  for (int k = top.last; k < kGridPoints; ++k) {
    if (value[k] < fmax - 0.5) {
      right = theta[k];
      break;
    }
  }
  if (std::isfinite(left) && std::isfinite(right)) {
    peak.grid_scale = 0.5 * (right - left);
  } else if (std::isfinite(left)) {
    peak.grid_scale = peak.argmax - left;
  } else if (std::isfinite(right)) {
    peak.grid_scale = right - peak.argmax;
  }
  if (!(peak.grid_scale > 0.0)) peak.grid_scale = 1.0;
  return peak;
}

double refine_maximum(const std::function<double(double)>& grad,
                      const std::function<double(double)>& curv, double lo, double hi,
                      double start, double grad_tol) {
  double a = lo;
  double b = hi;
  double x = start;
  for (int it = 0; it < 200; ++it) {
    const double g = grad(x);
    if (std::abs(g) <= grad_tol) return x;
    if (g > 0.0) {
      a = x;
    } else {
      b = x;
    }
    if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))) {
      return x;
    }
    const double h = curv(x);
    double next = (h < 0.0 && std::isfinite(h)) ? x - g / h : std::numeric_limits<double>::quiet_NaN();
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (next == x) return x;
    x = next;
  }
  return x;
}

}  // namespace edgepost::detail
