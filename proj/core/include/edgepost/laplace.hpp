#pragma once

#include <map>
#include <vector>

#include "edgepost/momentalg.hpp"
#include "edgepost/numderiv.hpp"
#include "edgepost/posterior.hpp"

namespace edgepost {

/// Taylor data of the log posterior at `center`, t = theta - center.
///
/// Sign convention (all arrays indexed by derivative order, entry 0 unused):
///   average loglikelihood  ~  -sum_j g[j] t^j / j!
///   log prior              ~  -sum_j h[j] t^j / j!
///   log posterior          ~  const + sum_j p[j] t^j / j!,  p[j] = -h[j] - n g[j]
/// so p[j] is the j-th derivative of the log posterior and p[2] < 0 at a
/// well-posed center. The Gaussian factor is exp(p[2] t^2 / 2) and omega is
/// the truncated series of exp(p[1] t + sum_{j>=3} p[j] t^j / j!).
struct LocalExpansion {
  double center = 0.0;
  DerivativeTable g{};
  DerivativeTable h{};
  DerivativeTable p{};
  int n_obs = 0;

  bool has_negative_curvature() const noexcept { return p[2] < 0.0; }
  /// True when every coefficient of order >= 3 vanishes on the posterior scale.
  bool is_gaussian() const noexcept;
};

LocalExpansion expand_local(const ModelSpec& model, double center);

/// Ascending coefficients (in t) of the omega polynomial, degree <= k.
std::vector<double> omega_poly(const LocalExpansion& le, int k);

/// The same exponential series truncated by asymptotic size instead of
/// degree: p1 t and p_j t^j / j! count as n^{-1/2} and n^{-(j-2)/2}, and
/// products up to n^{-(k-2)/2} are kept. For k = 5 this adds p3^2 t^6 / 72
/// and the other degree 6..9 products that omega_poly drops.
std::vector<double> omega_poly_by_order(const LocalExpansion& le, int k);

/// Extended-Laplace moments 1..6 about le.center, normalized to unit mass,
/// evaluated in closed form against the Gaussian factor times
/// omega_poly_by_order(le, k).
MomentVector laplace_moments(const LocalExpansion& le, int k);

enum class LaplaceCentering {
  fixed_point,  // iterate from the MLE to the Laplace mean
  oracle,       // expand at a supplied (exact) posterior mean
};

struct LaplaceOptions {
  int k = 5;
  LaplaceCentering centering = LaplaceCentering::fixed_point;
  double oracle_mean = 0.0;     // used with LaplaceCentering::oracle
  double center_tolerance = 1e-3;  // in units of the Laplace sd
  int max_iterations = 10;
};

struct LaplaceCumulants {
  CumulantVector beta;          // orders 1..5
  double kappa3 = 0.0;
  double kappa4 = 0.0;
  double kappa5 = 0.0;
  /// Claimed exponent of n for each invariant cumulant order.
  std::map<int, double> order_certificate;
  LocalExpansion expansion;     // at the final center
  std::vector<double> center_trace;
  bool gaussian_shortcut = false;
};

LaplaceCumulants laplace_cumulants(const ModelSpec& model, const LaplaceOptions& options = {});

}  // namespace edgepost
