#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "edgepost/convergence.hpp"
#include "edgepost/edgeworth.hpp"
#include "edgepost/errors.hpp"
#include "edgepost/models.hpp"
#include "edgepost/specialfn.hpp"
#include "quadrature_oracle.hpp"

namespace edgepost {
namespace {

InvariantCumulants exact_kappa(const PosteriorOracle& o) {
  return {o.invariant_cumulant(3), o.invariant_cumulant(4), o.invariant_cumulant(5)};
}

const InvariantCumulants kGeneric{0.42, -0.31, 0.27};

TEST(BuildSeries, ZeroCumulantsGivePureNormal) {
  for (int k = 2; k <= 5; ++k) {
    const EdgeworthSeries s = build_series({}, k, SeriesKind::density);
    EXPECT_TRUE(s.terms.empty());
    EXPECT_DOUBLE_EQ(eval_density(s, 0.0), 0.3989422804014327);
    const EdgeworthSeries c = build_series({}, k, SeriesKind::cdf);
    for (double x : {-2.0, 0.3, 1.7}) EXPECT_EQ(eval_cdf(c, x), normal_cdf(x));
  }
}

TEST(BuildSeries, OrderThreeHasThreeTerms) {
  const EdgeworthSeries s = build_series(kGeneric, 3, SeriesKind::density);
  ASSERT_EQ(s.terms.size(), 3u);
  EXPECT_EQ(s.terms[0].hermite_degree, 3);
  EXPECT_DOUBLE_EQ(s.terms[0].coefficient, 0.42 / 6.0);
  EXPECT_EQ(s.terms[0].order_halves, 1);
  EXPECT_EQ(s.terms[1].hermite_degree, 4);
  EXPECT_DOUBLE_EQ(s.terms[1].coefficient, -0.31 / 24.0);
  EXPECT_EQ(s.terms[1].order_halves, 2);
  EXPECT_EQ(s.terms[2].hermite_degree, 6);
  EXPECT_DOUBLE_EQ(s.terms[2].coefficient, 0.42 * 0.42 / 72.0);
  EXPECT_EQ(s.terms[2].order_halves, 2);
}

TEST(BuildSeries, OrderTwoHasSkewnessTermOnly) {
  const EdgeworthSeries s = build_series(kGeneric, 2, SeriesKind::density);
  ASSERT_EQ(s.terms.size(), 1u);
  EXPECT_EQ(s.terms[0].hermite_degree, 3);
  EXPECT_DOUBLE_EQ(s.terms[0].coefficient, 0.42 / 6.0);
}

TEST(BuildSeries, OrderFiveProductRule) {
  const EdgeworthSeries s = build_series(kGeneric, 5, SeriesKind::density);
  const auto c = coefficients_by_degree(s);
  const double k3 = kGeneric.k3, k4 = kGeneric.k4, k5 = kGeneric.k5;
  EXPECT_DOUBLE_EQ(c.at(5), k5 / 120.0);
  EXPECT_DOUBLE_EQ(c.at(7), k3 * k4 / 144.0);
  EXPECT_DOUBLE_EQ(c.at(9), std::pow(k3, 3) / 1296.0);
  EXPECT_NEAR(c.at(8), k3 * k5 / 720.0 + k4 * k4 / 1152.0, 1e-16);
  EXPECT_DOUBLE_EQ(c.at(10), k3 * k3 * k4 / 1728.0);
  EXPECT_DOUBLE_EQ(c.at(12), std::pow(k3, 4) / 31104.0);
  for (const auto& t : s.terms) {
    EXPECT_LT(t.order_halves, 5);
    EXPECT_GE(t.hermite_degree, 3);
    EXPECT_EQ(t.order_halves, edgeworth_degree_order(t.hermite_degree) + (t.hermite_degree == 8 ? 0 : 0));
  }
}

TEST(BuildSeries, RejectsOrderOutsideRange) {
  EXPECT_THROW(build_series(kGeneric, 1, SeriesKind::density), UnsupportedOrderError);
  EXPECT_THROW(build_series(kGeneric, 6, SeriesKind::density), UnsupportedOrderError);
}

TEST(EvalDensity, ValueAtZero) {
  const EdgeworthSeries s = build_series(kGeneric, 3, SeriesKind::density);
  // He3(0) = 0, He4(0) = 3, He6(0) = -15
  const double expected =
      normal_pdf(0.0) * (1.0 + 3.0 * kGeneric.k4 / 24.0 - 15.0 * kGeneric.k3 * kGeneric.k3 / 72.0);
  EXPECT_NEAR(eval_density(s, 0.0), expected, 1e-16);
}

TEST(EvalDensity, WrongKindIsUsageError) {
  const EdgeworthSeries s = build_series(kGeneric, 3, SeriesKind::density);
  EXPECT_THROW(eval_cdf(s, 0.0), UsageError);
  EXPECT_THROW(eval_density(build_series(kGeneric, 3, SeriesKind::cdf), 0.0), UsageError);
}

TEST(EvalCdf, Anchors) {
  const EdgeworthSeries s2 = build_series(kGeneric, 2, SeriesKind::cdf);
  // He2(0) = -1 and the cdf coefficient is -kappa3/6.
  EXPECT_NEAR(eval_cdf(s2, 0.0), 0.5 + normal_pdf(0.0) * kGeneric.k3 / 6.0, 1e-16);
  for (int k = 2; k <= 5; ++k) {
    EXPECT_NEAR(eval_cdf(build_series(kGeneric, k, SeriesKind::cdf), 10.0), 1.0, 1e-12);
  }
}

TEST(Series, IntegrateSeriesMatchesCdfKind) {
  for (int k = 2; k <= 5; ++k) {
    const EdgeworthSeries a = integrate_series(build_series(kGeneric, k, SeriesKind::density));
    const EdgeworthSeries b = build_series(kGeneric, k, SeriesKind::cdf);
    for (double x = -3.0; x <= 3.0; x += 0.5) EXPECT_DOUBLE_EQ(eval_cdf(a, x), eval_cdf(b, x));
  }
}

TEST(Series, SmallBetaBeatsNormalApproximation) {
  const PosteriorOracle o = exact_posterior(beta_binomial(0.5, 4.0, 5, 2));
  const Centering c{o.mean, o.sd, CenteringLabel::posterior_mean};
  const EdgeworthSeries ew = build_series(exact_kappa(o), 3, SeriesKind::density, c);
  const EdgeworthSeries nm = build_series({}, 3, SeriesKind::density, c);
  double ew_err = 0.0;
  double nm_err = 0.0;
  for (const double v : linspace(-3.0, 3.0, 241)) {
    const double t = o.mean + o.sd * v;
    const double exact = o.model.support.contains(t) ? o.sd * o.pdf(t) : 0.0;
    ew_err = std::max(ew_err, std::abs(eval_density(ew, v) - exact));
    nm_err = std::max(nm_err, std::abs(eval_density(nm, v) - exact));
  }
  EXPECT_LT(ew_err, nm_err);
}

TEST(Series, ThetaScaleJacobian) {
  const EdgeworthSeries s = build_series(kGeneric, 3, SeriesKind::density, {2.0, 0.5, CenteringLabel::posterior_mean});
  EXPECT_DOUBLE_EQ(density_at_theta(s, 2.25), eval_density(s, 0.5) / 0.5);
  const EdgeworthSeries c = build_series(kGeneric, 3, SeriesKind::cdf, {2.0, 0.5, CenteringLabel::posterior_mean});
  EXPECT_DOUBLE_EQ(cdf_at_theta(c, 2.25), eval_cdf(c, 0.5));
}

TEST(NegativityDiagnostic, FindsTailSignChanges) {
  const EdgeworthSeries s = build_series({1.5, 0.0, 0.0}, 2, SeriesKind::density);
  const SignChanges sc = negativity_diagnostic(s, -6.0, 6.0, 2001);
  ASSERT_TRUE(sc.leftmost.has_value());
  // 1 + 0.25 He3(x) = 0 has a single real root near x = -1.71.
  EXPECT_NEAR(eval_density(s, *sc.leftmost), 0.0, 1e-3);
  EXPECT_FALSE(negativity_diagnostic(build_series({}, 3, SeriesKind::density), -6, 6, 101).leftmost);
}

TEST(MleCentered, FlatGaussianBaselineIsExact) {
  const BuiltinModel m = normal_normal(0.0, std::numeric_limits<double>::infinity(), 1.0, 10, 0.3);
  const EdgeworthSeries s = build_mle_centered(instantiate(m), exact_posterior(m), 3);
  EXPECT_EQ(s.centering.label, CenteringLabel::mle);
  for (const auto& t : s.terms) EXPECT_NEAR(t.coefficient, 0.0, 1e-12) << t.hermite_degree;
}

TEST(MleCentered, SmallBetaHasDegreeOneTerm) {
  const BuiltinModel m = beta_binomial(0.5, 4.0, 5, 2);
  const EdgeworthSeries s = build_mle_centered(instantiate(m), exact_posterior(m), 3);
  const auto c = coefficients_by_degree(s);
  std::vector<int> degrees;
  for (const auto& [d, v] : c) degrees.push_back(d);
  EXPECT_EQ(degrees, (std::vector<int>{1, 2, 3, 4, 6}));
  // (mean - mle) / se
  EXPECT_NEAR(c.at(1), (2.5 / 9.5 - 0.4) / 0.2190890230, 1e-8);
  EXPECT_NEAR(s.centering.center, 0.4, 1e-10);
}

TEST(MleCentered, CdfKindIsAntiderivative) {
  const BuiltinModel m = beta_binomial(0.5, 4.0, 20, 8);
  const ModelSpec spec = instantiate(m);
  const PosteriorOracle o = exact_posterior(m);
  const EdgeworthSeries d = build_mle_centered(spec, o, 3, SeriesKind::density);
  const EdgeworthSeries c = build_mle_centered(spec, o, 3, SeriesKind::cdf);
  const double h = 1e-5;
  for (double x = -3.0; x <= 3.0; x += 0.5) {
    EXPECT_NEAR((eval_cdf(c, x + h) - eval_cdf(c, x - h)) / (2 * h), eval_density(d, x), 1e-6);
  }
}

TEST(Recenter, IdentityWhenShiftAndScaleMatch) {
  EdgeworthSeries s;
  s.kind = SeriesKind::density;
  s.order_k = 3;
  s.centering = {0.3, 0.1, CenteringLabel::mle};
  s.terms = {{3, 0.05, 1}, {4, -0.01, 2}, {6, 0.002, 2}};
  const EdgeworthSeries r = recenter(s, 3);
  EXPECT_EQ(r.centering.label, CenteringLabel::recentered);
  EXPECT_DOUBLE_EQ(r.centering.center, 0.3);
  EXPECT_DOUBLE_EQ(r.centering.scale, 0.1);
  EXPECT_LT(coefficient_distance(r, s), 1e-15);
  const auto c = coefficients_by_degree(r);
  EXPECT_EQ(c.count(1), 0u);
  EXPECT_EQ(c.count(2), 0u);
}

TEST(Recenter, DegenerateVarianceFactor) {
  EdgeworthSeries s;
  s.centering = {0.0, 1.0, CenteringLabel::mle};
  s.terms = {{1, 0.8, 1}, {2, -0.4, 2}};  // 1 + 2 c2 - c1^2 < 0
  EXPECT_THROW(recenter(s, 3), DegenerateRecenteringError);
  s.centering.label = CenteringLabel::posterior_mean;
  EXPECT_THROW(recenter(s, 3), UsageError);
}

TEST(Recenter, MatchesDirectSeries) {
  for (int n : {5, 40, 80, 160, 320}) {
    const BuiltinModel m = beta_binomial(0.5, 4.0, n, static_cast<int>(std::lround(0.4 * n)));
    const PosteriorOracle o = exact_posterior(m);
    const EdgeworthSeries direct = build_series(exact_kappa(o), 3, SeriesKind::density);
    const EdgeworthSeries r = recenter(build_mle_centered(instantiate(m), o, 3), 3);
    EXPECT_NEAR(r.centering.center, o.mean, 1e-12);
    EXPECT_NEAR(r.centering.scale, o.sd, 1e-12);
    const auto cr = coefficients_by_degree(r);
    const auto cd = coefficients_by_degree(direct);
    const double tol = 5.0 * std::pow(n, -1.5) * std::abs(cd.at(3));
    for (int d : {3, 4, 6}) EXPECT_NEAR(cr.at(d), cd.at(d), tol) << "n=" << n << " degree " << d;
  }
}

TEST(Comparator, PosteriorMeanCenteringDominatesOnSmallBeta) {
  const BuiltinModel m = beta_binomial(0.5, 4.0, 5, 2);
  const PosteriorOracle o = exact_posterior(m);
  const EdgeworthSeries ew =
      build_series(exact_kappa(o), 3, SeriesKind::density, {o.mean, o.sd, CenteringLabel::posterior_mean});
  const EdgeworthSeries mle = build_mle_centered(instantiate(m), o, 3);
  double ew_err = 0.0;
  double mle_err = 0.0;
  for (const double v : linspace(-3.0, 3.0, 241)) {
    const double t = o.mean + o.sd * v;
    const double exact = o.model.support.contains(t) ? o.pdf(t) : 0.0;
    ew_err = std::max(ew_err, std::abs(density_at_theta(ew, t) - exact));
    mle_err = std::max(mle_err, std::abs(density_at_theta(mle, t) - exact));
  }
  EXPECT_LE(ew_err, mle_err);
}

TEST(Orders, DegreeAndPseudoMomentTables) {
  const std::vector<int> ew = {0, -1, -1, 1, 2, 3, 2, 3, 4, 3, 4, 5, 4};
  for (int d = 0; d <= 12; ++d) EXPECT_EQ(edgeworth_degree_order(d), ew[static_cast<std::size_t>(d)]) << d;
  const std::vector<int> pm = {0, 1, 2, 1, 2, 3, 2};
  for (int d = 0; d <= 6; ++d) EXPECT_EQ(pseudo_moment_order(d), pm[static_cast<std::size_t>(d)]) << d;
}

}  // namespace
}  // namespace edgepost
