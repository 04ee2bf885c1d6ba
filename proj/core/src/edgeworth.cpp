#include "edgepost/edgeworth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "edgepost/errors.hpp"
#include "edgepost/momentalg.hpp"
#include "edgepost/specialfn.hpp"

namespace edgepost {

namespace {

constexpr int kMinOrderK = 2;
constexpr int kMaxOrderK = 5;
constexpr int kMaxPseudoDegree = 6;

void check_order_k(int order_k) {
  if (order_k < kMinOrderK || order_k > kMaxOrderK) {
    throw UnsupportedOrderError("expansion order k must lie in [2, 5], got " +
                                std::to_string(order_k));
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double kappa_of(const InvariantCumulants& k, int r) {
  switch (r) {
    case 3:
      return k.k3;
    case 4:
      return k.k4;
    default:
      return k.k5;
  }
}

// Multisets of {3,4,5} (non-decreasing) with sum (r - 2) < order_k.
void enumerate_products(int min_r, int budget, std::vector<int>& current,
                        std::vector<std::vector<int>>& out) {
  for (int r = min_r; r <= 5; ++r) {
    if (r - 2 > budget) break;
    current.push_back(r);
    out.push_back(current);
    enumerate_products(r, budget - (r - 2), current, out);
    current.pop_back();
  }
}

// E_phi[y^i He_j(y)] = i! / (i-j)! * (i-j-1)!! for i >= j with i - j even.
double normal_moment_times_hermite(int i, int j) {
  if (i < j || (i - j) % 2 != 0) return 0.0;
  double r = 1.0;
  for (int k = i; k > i - j; --k) r *= k;
  return r * gaussian_central_moment(i - j, 1.0);
}

void require_kind(const EdgeworthSeries& s, SeriesKind kind, const char* op) {
  if (s.kind != kind) {
    throw UsageError(std::string(op) + " called on a series of the wrong kind");
  }
}

int max_degree(const EdgeworthSeries& s) {
  int d = 0;
  for (const auto& t : s.terms) d = std::max(d, t.hermite_degree);
  return d;
}

double hermite_sum(const EdgeworthSeries& s, double x) {
  if (s.terms.empty()) return 0.0;
  const std::vector<double> he = hermite_values(max_degree(s), x);
  double acc = 0.0;
  for (const auto& t : s.terms) acc += t.coefficient * he[static_cast<std::size_t>(t.hermite_degree)];
  return acc;
}

}  // namespace

int edgeworth_degree_order(int degree) {
  if (degree == 0) return 0;
  constexpr int kNone = std::numeric_limits<int>::max();
  std::vector<int> best(static_cast<std::size_t>(std::max(degree, 0)) + 1, kNone);
  best[0] = 0;
  for (int d = 1; d <= degree; ++d) {
    for (int r = 3; r <= 5; ++r) {
      if (r <= d && best[static_cast<std::size_t>(d - r)] != kNone) {
        best[static_cast<std::size_t>(d)] =
            std::min(best[static_cast<std::size_t>(d)], best[static_cast<std::size_t>(d - r)] + r - 2);
      }
    }
  }
  const int v = best[static_cast<std::size_t>(degree)];
  return v == kNone ? -1 : v;
}

int pseudo_moment_order(int degree) {
  const auto part_order = [](int r) { return r == 1 ? 1 : (r == 2 ? 2 : r - 2); };
  std::vector<int> best(static_cast<std::size_t>(degree) + 1, std::numeric_limits<int>::max());
  best[0] = 0;
  for (int d = 1; d <= degree; ++d) {
    for (int r = 1; r <= d; ++r) {
      best[static_cast<std::size_t>(d)] =
          std::min(best[static_cast<std::size_t>(d)], best[static_cast<std::size_t>(d - r)] + part_order(r));
    }
  }
  return best[static_cast<std::size_t>(degree)];
}

EdgeworthSeries build_series(const InvariantCumulants& kappa, int order_k, SeriesKind kind,
                             const Centering& centering) {
  check_order_k(order_k);
  for (double v : {kappa.k3, kappa.k4, kappa.k5}) {
    if (!std::isfinite(v)) throw DomainError("invariant cumulants must be finite");
  }
  EdgeworthSeries s;
  s.kind = kind;
  s.order_k = order_k;
  s.centering = centering;
  s.cumulants_used = kappa;

  std::vector<std::vector<int>> products;
  std::vector<int> current;
  enumerate_products(3, order_k - 1, current, products);
  // Order products by asymptotic size, then by Hermite degree.
  std::stable_sort(products.begin(), products.end(), [](const auto& a, const auto& b) {
    int oa = 0, ob = 0, da = 0, db = 0;
    for (int r : a) oa += r - 2, da += r;
    for (int r : b) ob += r - 2, db += r;
    return oa != ob ? oa < ob : da < db;
  });

  for (const auto& prod : products) {
    std::array<int, 6> mult{};
    double coef = 1.0;
    int degree = 0;
    int order = 0;
    for (int r : prod) {
      coef *= kappa_of(kappa, r) / factorial(r);
      ++mult[static_cast<std::size_t>(r)];
      degree += r;
      order += r - 2;
    }
    for (int m : mult) coef /= factorial(m);
    if (coef == 0.0) continue;
    if (kind == SeriesKind::density) {
      s.terms.push_back({degree, coef, order});
    } else {
      s.terms.push_back({degree - 1, -coef, order});
    }
  }
  return s;
}

double eval_density(const EdgeworthSeries& s, double x) {
  require_kind(s, SeriesKind::density, "eval_density");
  return normal_pdf(x) * (1.0 + hermite_sum(s, x));
}

double eval_cdf(const EdgeworthSeries& s, double x) {
  require_kind(s, SeriesKind::cdf, "eval_cdf");
  if (s.terms.empty()) return normal_cdf(x);
  return normal_cdf(x) + normal_pdf(x) * hermite_sum(s, x);
}

EdgeworthSeries integrate_series(const EdgeworthSeries& density) {
  require_kind(density, SeriesKind::density, "integrate_series");
  EdgeworthSeries out = density;
  out.kind = SeriesKind::cdf;
  for (auto& t : out.terms) {
    t.hermite_degree -= 1;
    t.coefficient = -t.coefficient;
  }
  return out;
}

double density_at_theta(const EdgeworthSeries& s, double theta) {
  return eval_density(s, (theta - s.centering.center) / s.centering.scale) / s.centering.scale;
}

double cdf_at_theta(const EdgeworthSeries& s, double theta) {
  return eval_cdf(s, (theta - s.centering.center) / s.centering.scale);
}

SignChanges negativity_diagnostic(const EdgeworthSeries& s, double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) throw DomainError("diagnostic grid needs lo < hi and >= 2 points");
  SignChanges out;
  double prev_x = lo;
  double prev_v = eval_density(s, lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double v = eval_density(s, x);
    if ((prev_v < 0.0) != (v < 0.0)) {
      const double root = prev_x + (x - prev_x) * prev_v / (prev_v - v);
      if (!out.leftmost) out.leftmost = root;
      out.rightmost = root;
    }
    prev_x = x;
    prev_v = v;
  }
  return out;
}

EdgeworthSeries build_mle_centered(const ModelSpec& model, const PosteriorOracle& oracle,
                                   int order_k, SeriesKind kind) {
  check_order_k(order_k);
  if (oracle.cumulants.max_order() < kMaxPseudoDegree) {
    throw UnsupportedOrderError("MLE-centered series needs oracle cumulants to order 6");
  }
  const double mle = find_mle(model);
  const double se = observed_info_sd(model, mle);

  // Pseudo-cumulants: cumulants of (theta - mle) / se minus those of N(0, 1).
  CumulantVector delta;
  delta.values.resize(kMaxPseudoDegree);
  double scale_pow = 1.0;
  for (int j = 1; j <= kMaxPseudoDegree; ++j) {
    scale_pow *= se;
    double v = oracle.cumulants(j);
    if (j == 1) v -= mle;
    v /= scale_pow;
    if (j == 2) v -= 1.0;
    delta.values[static_cast<std::size_t>(j) - 1] = v;
  }
  const MomentVector pseudo = cumulants_to_moments(delta, 0.0);

  EdgeworthSeries s;
  s.kind = kind;
  s.order_k = order_k;
  s.centering = {mle, se, CenteringLabel::mle};
  s.cumulants_used = {oracle.invariant_cumulant(3), oracle.invariant_cumulant(4),
                      oracle.invariant_cumulant(5)};
  for (int j = 1; j <= kMaxPseudoDegree; ++j) {
    const int order = pseudo_moment_order(j);
    if (order >= order_k) continue;
    const double coef = pseudo(j) / factorial(j);
    if (kind == SeriesKind::density) {
      s.terms.push_back({j, coef, order});
    } else {
      s.terms.push_back({j - 1, -coef, order});
    }
  }
  return s;
}

EdgeworthSeries recenter(const EdgeworthSeries& s, int order_k) {
  check_order_k(order_k);
  require_kind(s, SeriesKind::density, "recenter");
  if (s.centering.label != CenteringLabel::mle) {
    throw UsageError("recenter expects an MLE-centered series");
  }
  const std::map<int, double> b = coefficients_by_degree(s);
  const auto coef = [&](int d) {
    const auto it = b.find(d);
    return it == b.end() ? 0.0 : it->second;
  };
  const double shift = coef(1);                                // mean of the formal density
  const double variance = 1.0 + 2.0 * coef(2) - shift * shift;  // 1 - c1^2 - 2 c2, Weng signs
  if (!(variance > 0.0)) {
    throw DegenerateRecenteringError("recentering variance factor is not positive (" +
                                     std::to_string(variance) + ")");
  }
  const double stretch = std::sqrt(variance);

  // Moments E_w[y^i] of the formal density w = phi (1 + sum b_d He_d).
  constexpr int kTop = kMaxHermiteDegree;
  std::array<double, kTop + 1> raw{};
  for (int i = 0; i <= kTop; ++i) {
    double m = gaussian_central_moment(i, 1.0);
    for (const auto& [d, c] : b) m += c * normal_moment_times_hermite(i, d);
    raw[static_cast<std::size_t>(i)] = m;
  }
  // E_w[((y - shift) / stretch)^l]
  std::array<double, kTop + 1> standardized{};
  for (int l = 0; l <= kTop; ++l) {
    double acc = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= l; ++i) {
      acc += binom * raw[static_cast<std::size_t>(i)] * std::pow(-shift, l - i);
      binom = binom * (l - i) / (i + 1);
    }
    standardized[static_cast<std::size_t>(l)] = acc / std::pow(stretch, l);
  }
  // Hermite projection: coefficient of He_d is E[He_d(rho)] / d!.
  const auto projection = [&](int d) {
    const HermitePoly he = hermite(d);
    double acc = 0.0;
    for (int l = 0; l <= d; ++l) acc += he.coefficients[static_cast<std::size_t>(l)] * standardized[static_cast<std::size_t>(l)];
    return acc / factorial(d);
  };

  EdgeworthSeries out;
  out.kind = SeriesKind::density;
  out.order_k = order_k;
  out.centering = {s.centering.center + s.centering.scale * shift, s.centering.scale * stretch,
                   CenteringLabel::recentered};
  out.cumulants_used = {6.0 * projection(3), 24.0 * projection(4), 120.0 * projection(5)};
  for (int d = 3; d <= kTop; ++d) {
    const int order = edgeworth_degree_order(d);
    if (order < 0 || order >= order_k) continue;
    out.terms.push_back({d, projection(d), order});
  }
  return out;
}

std::map<int, double> coefficients_by_degree(const EdgeworthSeries& s) {
  std::map<int, double> out;
  for (const auto& t : s.terms) out[t.hermite_degree] += t.coefficient;
  return out;
}

double coefficient_distance(const EdgeworthSeries& a, const EdgeworthSeries& b) {
  auto ca = coefficients_by_degree(a);
  const auto cb = coefficients_by_degree(b);
  for (const auto& [d, c] : cb) ca[d] -= c;
  double worst = 0.0;
  for (const auto& [d, c] : ca) worst = std::max(worst, std::abs(c));
  return worst;
}

}  // namespace edgepost
