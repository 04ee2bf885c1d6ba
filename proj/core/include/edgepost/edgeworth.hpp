#pragma once

#include <map>
#include <optional>
#include <vector>

#include "edgepost/posterior.hpp"

namespace edgepost {

enum class SeriesKind { density, cdf };

enum class CenteringLabel {
  posterior_mean,
  mle,
  recentered,  // MLE-centered series moved to its own mean and variance
};

/// Invariant cumulants of the standardized parameter.
struct InvariantCumulants {
  double k3 = 0.0;
  double k4 = 0.0;
  double k5 = 0.0;
};

/// One correction term coefficient * He_degree, of asymptotic size
/// n^{-order_halves / 2}.
struct SeriesTerm {
  int hermite_degree = 0;
  double coefficient = 0.0;
  int order_halves = 0;
};

/// Affine map from theta to the series variable: (theta - center) / scale.
struct Centering {
  double center = 0.0;
  double scale = 1.0;
  CenteringLabel label = CenteringLabel::posterior_mean;
};

/// Hermite series around the standard normal.
///   density:  phi(x) * (1 + sum c_j He_{d_j}(x))
///   cdf:      Phi(x) + phi(x) * sum c_j He_{d_j}(x)
/// For the cdf kind the stored terms are already the antiderivatives (degree
/// lowered by one, coefficient negated).
struct EdgeworthSeries {
  SeriesKind kind = SeriesKind::density;
  int order_k = 3;
  std::vector<SeriesTerm> terms;
  Centering centering;
  InvariantCumulants cumulants_used;
};

/// Formal Edgeworth series keeping products kappa_{r_1}...kappa_{r_m},
/// r_i in {3,4,5}, with sum (r_i - 2) < order_k. order_k in {2,3,4,5}.
EdgeworthSeries build_series(const InvariantCumulants& kappa, int order_k, SeriesKind kind,
                             const Centering& centering = {});

double eval_density(const EdgeworthSeries& s, double x);
double eval_cdf(const EdgeworthSeries& s, double x);

/// Antiderivative of a density series: the matching cdf series
/// (d/dx [phi He_j] = -phi He_{j+1}).
EdgeworthSeries integrate_series(const EdgeworthSeries& density);

/// Series evaluated on the original parameter scale (density picks up 1/scale).
double density_at_theta(const EdgeworthSeries& s, double theta);
double cdf_at_theta(const EdgeworthSeries& s, double theta);

/// Outermost sign changes of a density series on [lo, hi]; Edgeworth
/// densities may dip below zero in the tails.
struct SignChanges {
  std::optional<double> leftmost;
  std::optional<double> rightmost;
};
SignChanges negativity_diagnostic(const EdgeworthSeries& s, double lo, double hi, int points);

/// Gram-Charlier series around N(mle, se^2) with pseudo-moments from the
/// oracle cumulants; keeps Hermite degrees 1..6 whose leading order is
/// below n^{-order_k/2}.
EdgeworthSeries build_mle_centered(const ModelSpec& model, const PosteriorOracle& oracle,
                                   int order_k, SeriesKind kind = SeriesKind::density);

/// Moves an MLE-centered density series to its own mean and variance and
/// re-projects onto the Hermite basis, keeping the degrees whose Edgeworth
/// order is below n^{-order_k/2}. Degree-1 and degree-2 terms vanish.
EdgeworthSeries recenter(const EdgeworthSeries& s, int order_k);

/// Sum of coefficients per Hermite degree.
std::map<int, double> coefficients_by_degree(const EdgeworthSeries& s);

/// max over degrees of |coefficient difference|.
double coefficient_distance(const EdgeworthSeries& a, const EdgeworthSeries& b);

/// Order of a Hermite degree in n^{-1/2} units: the smallest sum of (r-2)
/// over multisets of {3,4,5} adding up to the degree (-1 if none).
int edgeworth_degree_order(int degree);

/// Leading order of a Gram-Charlier pseudo-moment in n^{-1/2} units, with
/// pseudo-cumulants of order 1 ~ n^{-1/2}, 2 ~ n^{-1}, r >= 3 ~ n^{-(r-2)/2}.
int pseudo_moment_order(int degree);

}  // namespace edgepost
