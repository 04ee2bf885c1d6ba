// Randomized invariants. Generators are seeded so failures reproduce.
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "edgepost/edgeworth.hpp"
#include "edgepost/models.hpp"
#include "edgepost/momentalg.hpp"
#include "edgepost/posterior.hpp"
#include "quadrature_oracle.hpp"

namespace edgepost {
namespace {

class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  CumulantVector cumulants(int order) {
    CumulantVector c;
    for (int j = 1; j <= order; ++j) c.values.push_back(j == 2 ? uniform(0.1, 5.0) : uniform(-5.0, 5.0));
    return c;
  }

  // Small invariant cumulants keep the formal series close to a density.
  InvariantCumulants kappa() { return {uniform(-0.6, 0.6), uniform(-0.4, 0.4), uniform(-0.3, 0.3)}; }

  BuiltinModel model() {
    switch (integer(0, 2)) {
      case 0: {
        const int n = integer(5, 60);
        return beta_binomial(uniform(0.5, 6.0), uniform(0.5, 6.0), n, integer(1, n - 1));
      }
      case 1:
        return normal_normal(uniform(-2, 2), uniform(0.2, 5.0), uniform(0.3, 3.0), integer(1, 40),
                             uniform(-3, 3));
      default: {
        const int n = integer(2, 40);
        return gamma_exponential(uniform(0.5, 6.0), uniform(0.2, 4.0), n, uniform(0.2, 3.0) * n);
      }
    }
  }

 private:
  std::mt19937_64 rng_;
};

TEST(Properties, MomentCumulantRoundTrip) {
  Gen g(101);
  for (int trial = 0; trial < 200; ++trial) {
    const int order = g.integer(2, 6);
    const CumulantVector c = g.cumulants(order);
    const double about = g.uniform(-2.0, 2.0);
    const MomentVector m = cumulants_to_moments(c, about);
    const CumulantVector back = moments_to_cumulants(m);
    ASSERT_EQ(back.max_order(), order);
    // Relative to the largest moment the conversion passes through.
    double scale = 1.0;
    for (double v : m.values) scale = std::max(scale, std::abs(v));
    for (int j = 1; j <= order; ++j) {
      EXPECT_NEAR(back(j), c(j), 1e-12 * scale) << "trial " << trial << " j=" << j;
    }
  }
}

TEST(Properties, ShiftInvarianceOfHigherCumulants) {
  Gen g(202);
  for (int trial = 0; trial < 100; ++trial) {
    const CumulantVector c = g.cumulants(6);
    const MomentVector m = cumulants_to_moments(c, 0.0);
    const MomentVector moved = shift_moments(m, g.uniform(-3.0, 3.0));
    const CumulantVector c2 = moments_to_cumulants(moved);
    for (int j = 1; j <= 6; ++j) EXPECT_NEAR(c2(j), c(j), 1e-8 * std::max(1.0, std::abs(c(j))));
  }
}

TEST(Properties, GaussianPolyIntegralMatchesQuadrature) {
  Gen g(303);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> poly(static_cast<std::size_t>(g.integer(1, 7)));
    for (double& p : poly) p = g.uniform(-2.0, 2.0);
    const double mean = g.uniform(-2.0, 2.0);
    const double var = g.uniform(0.1, 3.0);
    const int shift = g.integer(0, 3);
    const double closed = gaussian_poly_integral(poly, mean, var, shift);
    const double sd = std::sqrt(var);
    const auto f = [&](double t) {
      double p = 0.0;
      for (std::size_t i = poly.size(); i-- > 0;) p = p * (t - mean) + poly[i];
      const double z = (t - mean) / sd;
      return std::pow(t, shift) * p * std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
    };
    const double quad = testing::integrate_panels(f, mean - 40 * sd, mean + 40 * sd);
    EXPECT_NEAR(closed, quad, 1e-9 * std::max(1.0, std::abs(quad))) << "trial " << trial;
  }
}

TEST(Properties, SeriesHasUnitMassAndMatchingCdf) {
  Gen g(404);
  for (int trial = 0; trial < 40; ++trial) {
    const InvariantCumulants k = g.kappa();
    const int order = g.integer(2, 5);
    const EdgeworthSeries d = build_series(k, order, SeriesKind::density);
    const EdgeworthSeries c = build_series(k, order, SeriesKind::cdf);
    const double mass = testing::integrate_panels([&](double x) { return eval_density(d, x); }, -12, 12);
    EXPECT_NEAR(mass, 1.0, 1e-9);
    for (int i = 0; i < 5; ++i) {
      const double x = g.uniform(-4.0, 4.0);
      const double h = 1e-5;
      EXPECT_NEAR((eval_cdf(c, x + h) - eval_cdf(c, x - h)) / (2 * h), eval_density(d, x), 1e-6);
      const double integral =
          testing::integrate_panels([&](double t) { return eval_density(d, t); }, -12.0, x);
      EXPECT_NEAR(eval_cdf(c, x), integral, 1e-9);
    }
  }
}

TEST(Properties, SeriesMatchesFirstCumulants) {
  Gen g(505);
  for (int trial = 0; trial < 30; ++trial) {
    const InvariantCumulants k = g.kappa();
    const EdgeworthSeries d = build_series(k, 3, SeriesKind::density);
    const auto moment = [&](int r) {
      return testing::integrate_panels([&](double x) { return std::pow(x, r) * eval_density(d, x); },
                                       -14, 14);
    };
    EXPECT_NEAR(moment(1), 0.0, 1e-8);
    EXPECT_NEAR(moment(2), 1.0, 1e-8);
    EXPECT_NEAR(moment(3), k.k3, 1e-8);
    EXPECT_NEAR(moment(4), 3.0 + k.k4, 1e-8);
    EXPECT_NEAR(moment(6), 15.0 + 15.0 * k.k4 + 10.0 * k.k3 * k.k3, 1e-7);
  }
}

TEST(Properties, OraclesAgreeAndAreSelfConsistent) {
  Gen g(606);
  for (int trial = 0; trial < 12; ++trial) {
    const BuiltinModel m = g.model();
    SCOPED_TRACE(std::string(to_string(m.family)) + " n=" + std::to_string(m.n));
    const PosteriorOracle exact = exact_posterior(m);
    const PosteriorOracle quad = build_oracle(instantiate(m), 1e-12);
    EXPECT_LT(testing::rel_diff(quad.mean, exact.mean), 1e-8);
    EXPECT_LT(testing::rel_diff(quad.sd, exact.sd), 1e-8);
    for (int j = 3; j <= 5; ++j) {
      EXPECT_NEAR(quad.invariant_cumulant(j), exact.invariant_cumulant(j),
                  1e-7 * std::max(1.0, std::abs(exact.invariant_cumulant(j))));
    }
    // Median from the cdf, then the pdf integrates back to it.
    const double lo = std::max(exact.model.support.lo, exact.mean - 12 * exact.sd);
    const double mass = testing::integrate(exact.pdf, lo, exact.mean);
    EXPECT_NEAR(mass, exact.cdf(exact.mean) - exact.cdf(lo), 1e-9);
  }
}

TEST(Properties, AffineEquivariance) {
  Gen g(707);
  for (int trial = 0; trial < 8; ++trial) {
    const BuiltinModel m = g.model();
    const double scale = g.uniform(0.2, 5.0) * (trial % 2 ? -1.0 : 1.0);
    const double shift = g.uniform(-3.0, 3.0);
    const PosteriorOracle base = build_oracle(instantiate(m));
    const PosteriorOracle moved = build_oracle(affine_reparameterize(instantiate(m), scale, shift));
    EXPECT_NEAR(moved.mean, scale * base.mean + shift, 1e-9 * std::max(1.0, std::abs(moved.mean)));
    EXPECT_NEAR(moved.sd, std::abs(scale) * base.sd, 1e-9 * moved.sd);
    const double sign = scale > 0 ? 1.0 : -1.0;
    const InvariantCumulants kb{base.invariant_cumulant(3), base.invariant_cumulant(4),
                                base.invariant_cumulant(5)};
    const InvariantCumulants km{moved.invariant_cumulant(3), moved.invariant_cumulant(4),
                                moved.invariant_cumulant(5)};
    EXPECT_NEAR(km.k3, sign * kb.k3, 1e-8);
    EXPECT_NEAR(km.k4, kb.k4, 1e-8);
    EXPECT_NEAR(km.k5, sign * kb.k5, 1e-8);
    if (scale > 0) {
      const auto a = coefficients_by_degree(build_series(kb, 3, SeriesKind::density));
      const auto b = coefficients_by_degree(build_series(km, 3, SeriesKind::density));
      for (const auto& [d, v] : a) EXPECT_NEAR(b.at(d), v, 1e-10);
    }
  }
}

}  // namespace
}  // namespace edgepost
