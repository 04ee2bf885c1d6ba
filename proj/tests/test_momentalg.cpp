#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "edgepost/errors.hpp"
#include "edgepost/momentalg.hpp"
#include "quadrature_oracle.hpp"

namespace edgepost {
namespace {

MomentVector moments(std::vector<double> v, double about = 0.0) { return {about, std::move(v)}; }
CumulantVector cumulants(std::vector<double> v) { return {std::move(v)}; }

TEST(MomentsToCumulants, StandardNormal) {
  const auto c = moments_to_cumulants(moments({0, 1, 0, 3}));
  ASSERT_EQ(c.max_order(), 4);
  EXPECT_NEAR(c(1), 0.0, 1e-15);
  EXPECT_NEAR(c(2), 1.0, 1e-15);
  EXPECT_NEAR(c(3), 0.0, 1e-15);
  EXPECT_NEAR(c(4), 0.0, 1e-15);
}

TEST(MomentsToCumulants, UnitExponential) {
  // Raw moments j!; cumulants (j-1)! from the log MGF -log(1 - t).
  const auto c = moments_to_cumulants(moments({1, 2, 6, 24}));
  EXPECT_DOUBLE_EQ(c(1), 1.0);
  EXPECT_DOUBLE_EQ(c(2), 1.0);
  EXPECT_DOUBLE_EQ(c(3), 2.0);
  EXPECT_DOUBLE_EQ(c(4), 6.0);
}

TEST(MomentsToCumulants, PointMass) {
  const double c0 = 1.7;
  const auto c = moments_to_cumulants(moments({c0, c0 * c0, c0 * c0 * c0}));
  EXPECT_DOUBLE_EQ(c(1), c0);
  EXPECT_NEAR(c(2), 0.0, 1e-14);
  EXPECT_NEAR(c(3), 0.0, 1e-14);
}

TEST(MomentsToCumulants, FirstCumulantIsAbsolute) {
  // N(2, 1) described by central moments about its mean.
  const auto c = moments_to_cumulants(moments({0, 1, 0, 3}, 2.0));
  EXPECT_DOUBLE_EQ(c(1), 2.0);
  EXPECT_NEAR(c(2), 1.0, 1e-15);
}

TEST(MomentsToCumulants, OrderLimits) {
  EXPECT_THROW(moments_to_cumulants(moments({1})), InsufficientOrderError);
  EXPECT_THROW(moments_to_cumulants(moments(std::vector<double>(9, 1.0))), UnsupportedOrderError);
}

TEST(CumulantsToMoments, StandardNormalAndExponential) {
  const auto m = cumulants_to_moments(cumulants({0, 1, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(m(1), 0.0);
  EXPECT_DOUBLE_EQ(m(2), 1.0);
  EXPECT_DOUBLE_EQ(m(3), 0.0);
  EXPECT_DOUBLE_EQ(m(4), 3.0);
  const auto e = cumulants_to_moments(cumulants({1, 1, 2, 6}), 0.0);
  EXPECT_DOUBLE_EQ(e(1), 1.0);
  EXPECT_DOUBLE_EQ(e(2), 2.0);
  EXPECT_DOUBLE_EQ(e(3), 6.0);
  EXPECT_DOUBLE_EQ(e(4), 24.0);
}

TEST(CumulantsToMoments, GaussianEighthMoment) {
  const auto m = cumulants_to_moments(cumulants({0, 2, 0, 0, 0, 0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(m(6), 15.0 * 8.0);
  EXPECT_DOUBLE_EQ(m(8), 105.0 * 16.0);
}

TEST(ShiftMoments, CentralMomentsOfExponential) {
  const auto c = central_moments(moments({1, 2, 6, 24}));
  EXPECT_DOUBLE_EQ(c.about, 1.0);
  EXPECT_NEAR(c(1), 0.0, 1e-15);
  EXPECT_NEAR(c(2), 1.0, 1e-14);
  EXPECT_NEAR(c(3), 2.0, 1e-14);
  EXPECT_NEAR(c(4), 9.0, 1e-13);
  const auto back = shift_moments(c, 0.0);
  for (int j = 1; j <= 4; ++j) EXPECT_NEAR(back(j), std::tgamma(j + 1.0), 1e-12);
}

TEST(GaussianCentralMoment, DoubleFactorials) {
  EXPECT_EQ(gaussian_central_moment(0, 2.0), 1.0);
  EXPECT_EQ(gaussian_central_moment(3, 2.0), 0.0);
  EXPECT_EQ(gaussian_central_moment(4, 2.0), 12.0);
  EXPECT_EQ(gaussian_central_moment(6, 1.0), 15.0);
  EXPECT_THROW(gaussian_central_moment(2, 0.0), DomainError);
}

TEST(GaussianPolyIntegral, SpecAnchors) {
  const std::vector<double> one = {1.0};
  EXPECT_DOUBLE_EQ(gaussian_poly_integral(one, 0.0, 1.0, 2), 1.0);
  const std::vector<double> x2 = {0.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(gaussian_poly_integral(x2, 0.0, 0.3, 0), 0.3);
  const std::vector<double> x3 = {0.0, 0.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(gaussian_poly_integral(x3, 1.0, 2.0, 1), 12.0);
}

TEST(GaussianPolyIntegral, AgreesWithQuadrature) {
  const std::vector<double> poly = {0.5, -1.25, 0.75, 2.0, -0.3};
  const double mu = -0.7;
  const double v = 1.9;
  const double sd = std::sqrt(v);
  for (int s = 0; s <= 6; ++s) {
    const double oracle = testing::integrate_panels(
        [&](double theta) {
          const double t = theta - mu;
          double p = 0.0;
          for (std::size_t i = poly.size(); i-- > 0;) p = p * t + poly[i];
          return std::pow(theta, s) * p * std::exp(-0.5 * t * t / v) / (sd * std::sqrt(2.0 * M_PI));
        },
        mu - 40 * sd, mu + 40 * sd);
    EXPECT_NEAR(gaussian_poly_integral(poly, mu, v, s), oracle, 1e-11 * std::max(1.0, std::abs(oracle)))
        << s;
  }
}

TEST(GaussianPolyIntegral, RejectsBadInput) {
  const std::vector<double> one = {1.0};
  EXPECT_THROW(gaussian_poly_integral(one, 0.0, -1.0, 0), DomainError);
  const std::vector<double> big(20, 1.0);
  EXPECT_THROW(gaussian_poly_integral(big, 0.0, 1.0, 2), UnsupportedOrderError);
}

}  // namespace
}  // namespace edgepost
