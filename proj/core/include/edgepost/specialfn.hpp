#pragma once

#include <vector>

namespace edgepost {

/// Largest Hermite degree the library hands out. Expansions up to order
/// five need products of at most four third cumulants, i.e. degree 12.
inline constexpr int kMaxHermiteDegree = 12;

/// Monic probabilists' Hermite polynomial He_n, coefficients in ascending
/// monomial order. Coefficients are integers and exact in double up to the cap.
struct HermitePoly {
  int degree = 0;
  std::vector<double> coefficients;

  double operator()(double x) const;
};

HermitePoly hermite(int degree);

/// He_degree(x) by the three-term recurrence.
double hermite_eval(int degree, double x);

/// He_0(x) .. He_max_degree(x) in one sweep of the recurrence.
std::vector<double> hermite_values(int max_degree, double x);

double normal_pdf(double x);
double normal_cdf(double x);

}  // namespace edgepost
