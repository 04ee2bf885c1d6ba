#pragma once

#include <span>
#include <vector>

namespace edgepost {

/// Conversions are tabulated up to this order.
inline constexpr int kMaxMomentOrder = 8;

/// Moments E[(X - about)^j] for j = 1..max_order(); values[j - 1] holds order j.
struct MomentVector {
  double about = 0.0;
  std::vector<double> values;

  int max_order() const noexcept { return static_cast<int>(values.size()); }
  /// Order-j moment; order 0 is 1 by convention.
  double operator()(int j) const { return j == 0 ? 1.0 : values.at(static_cast<std::size_t>(j) - 1); }
};

/// Cumulants kappa_j for j = 1..max_order(); values[j - 1] holds order j.
struct CumulantVector {
  std::vector<double> values;

  int max_order() const noexcept { return static_cast<int>(values.size()); }
  double operator()(int j) const { return values.at(static_cast<std::size_t>(j) - 1); }
};

/// Cumulants of X from moments about m.about. The first cumulant is reported
/// on the absolute scale (shifted back by m.about).
CumulantVector moments_to_cumulants(const MomentVector& m);

/// Moments of X about `about` from absolute cumulants.
MomentVector cumulants_to_moments(const CumulantVector& c, double about);

/// Re-expresses moments about a new expansion point (binomial shift).
MomentVector shift_moments(const MomentVector& m, double new_about);

/// Moments about the mean.
MomentVector central_moments(const MomentVector& m);

/// E[Z^order] for Z ~ N(0, variance).
double gaussian_central_moment(int order, double variance);

/// Integral of theta^power_shift * poly(theta - mean) against the N(mean, variance)
/// density, in closed form. `poly` holds ascending monomial coefficients.
double gaussian_poly_integral(std::span<const double> poly, double mean, double variance,
                              int power_shift);

}  // namespace edgepost
