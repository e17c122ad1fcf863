#include "fraclap/gauss_legendre.hpp"

#include "two_double.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fraclap::quad {

namespace {

// Legendre P_n and its derivative by the three-term recurrence.
void legendre_pair(int n, double x, double* p, double* dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  *p = p1;
  *dp = n * (x * p1 - p0) / (x * x - 1.0);
}

// Same recurrence in two-double arithmetic. Plain-double weights come out
// ~40 eps off through the recurrence rounding, which the oscillatory weight
// quadrature sees as a coherent per-panel bias.
void legendre_pair_td(int n, detail::TwoDouble x, detail::TwoDouble* p,
                      detail::TwoDouble* dp) {
  using namespace detail;
  TwoDouble p0{1.0, 0.0}, p1 = x;
  for (int k = 2; k <= n; ++k) {
    TwoDouble t = td_mul_d(td_mul(x, p1), 2.0 * k - 1.0);
    t = td_add(t, td_mul_d(p0, -(k - 1.0)));
    const TwoDouble p2 = td_div_d(t, static_cast<double>(k));
    p0 = p1;
    p1 = p2;
  }
  *p = p1;
  const TwoDouble num =
      td_mul_d(td_add(td_mul(x, p1), td_mul_d(p0, -1.0)), double(n));
  const TwoDouble den = td_add_d(td_mul(x, x), -1.0);
  *dp = td_div(num, den);
}

GaussRule compute_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(n, x, &p, &dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Two more Newton steps and the weight evaluation in two-double.
    detail::TwoDouble xt{x, 0.0}, pt, dpt;
    for (int it = 0; it < 2; ++it) {
      legendre_pair_td(n, xt, &pt, &dpt);
      xt = detail::td_add(xt, detail::td_mul_d(detail::td_div(pt, dpt), -1.0));
    }
    legendre_pair_td(n, xt, &pt, &dpt);
    const detail::TwoDouble one_m_x2 =
        detail::td_mul_d(detail::td_add_d(detail::td_mul(xt, xt), -1.0), -1.0);
    const detail::TwoDouble wt =
        detail::td_div({2.0, 0.0}, detail::td_mul(one_m_x2,
                                                  detail::td_mul(dpt, dpt)));
    const double xd = xt.hi + xt.lo;
    rule.nodes[i] = -xd;
    rule.nodes[n - 1 - i] = xd;
    const double w = wt.hi + wt.lo;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

}  // namespace fraclap::quad
