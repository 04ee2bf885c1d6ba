#pragma once

#include <array>
#include <functional>

namespace edgepost {

/// Highest Taylor order carried by local expansions.
inline constexpr int kLocalOrder = 6;

/// f(x), f'(x), ..., f^(6)(x).
using DerivativeTable = std::array<double, kLocalOrder + 1>;

struct DerivativeEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// Order-`order` derivative by Ridders' extrapolation of the symmetric
/// central-difference stencil, starting from step `h0` and shrinking by 1.4
/// per level. The stencil reaches x +/- (order/2) * h0.
DerivativeEstimate ridders_derivative(const std::function<double(double)>& f, double x,
                                      int order, double h0);

/// Orders 0..kLocalOrder. `max_reach` bounds how far from x the stencils may
/// sample (distance to the nearest support boundary); `scale` is the
/// characteristic length of f near x.
DerivativeTable finite_difference_table(const std::function<double(double)>& f, double x,
                                        double scale, double max_reach);

}  // namespace edgepost
