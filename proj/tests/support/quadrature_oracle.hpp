#pragma once

// Independent numerical oracles for tests. Nothing here calls into the
// library's own integrator.

#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace edgepost::testing {

/// Integral of f over [a, b] with tanh-sinh on equal pieces. tanh-sinh
/// handles endpoint singularities; the pieces keep a narrow interior peak
/// from falling between its nodes.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-14, int pieces = 32) {
  boost::math::quadrature::tanh_sinh<double> ts;
  double acc = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * w;
    const double hi = i + 1 == pieces ? b : a + (i + 1) * w;
    acc += ts.integrate(f, lo, hi, tol);
  }
  return acc;
}

/// Integral of f over [a, b] cut into `pieces` Gauss-Kronrod panels.
inline double integrate_panels(const std::function<double(double)>& f, double a, double b,
                               int pieces = 64) {
  double acc = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    acc += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a + i * w,
                                                                         a + (i + 1) * w, 0, 0.0);
  }
  return acc;
}

/// Relative difference |a - b| / max(|b|, floor).
inline double rel_diff(double a, double b, double floor = 1e-300) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}

}  // namespace edgepost::testing
