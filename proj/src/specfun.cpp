#include "fraclap/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fraclap/gauss_legendre.hpp"
#include "two_double.hpp"

namespace fraclap::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(double x) {
  return x < 0.5 && std::abs(x - std::nearbyint(x)) < 1e-12;
}

// Compensated (Kahan) accumulator.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double term) {
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double gamma_core(double x) {
  // Valid for x >= 0.5.
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x - 1.0 + i);
  const double t = x + 6.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, x - 0.5) * std::exp(-t) * acc;
}

// Shared 2F1 series; caller guarantees convergence of the parameter set.
double gauss_series(double a, double b, double c, double z) {
  Kahan sum;
  sum.add(1.0);
  double term = 1.0;
  int calm = 0;
  for (long k = 0; k < 2'000'000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
    if (term == 0.0) break;
    sum.add(term);
    if (std::abs(term) < 0.25 * kEps * std::abs(sum.sum)) {
      if (++calm == 3) break;
    } else {
      calm = 0;
    }
    if (k == 2'000'000 - 1)
      throw std::runtime_error("hyp2f1: series failed to converge");
  }
  return sum.sum;
}

double kummer_series(double a, double b, double z) {
  Kahan sum;
  sum.add(1.0);
  double term = 1.0;
  int calm = 0;
  for (long k = 0; k < 1'000'000; ++k) {
    term *= (a + k) / ((b + k) * (k + 1)) * z;
    if (term == 0.0) break;
    sum.add(term);
    if (std::abs(term) < 0.25 * kEps * std::abs(sum.sum)) {
      if (++calm == 3) break;
    } else {
      calm = 0;
    }
    if (k == 1'000'000 - 1)
      throw std::runtime_error("hyp1f1: series failed to converge");
  }
  return sum.sum;
}

}  // namespace

double gamma(double x) {
  if (is_nonpositive_integer(x))
    throw std::domain_error("gamma: pole at nonpositive integer x = " +
                            std::to_string(x));
  if (x >= 0.5) return gamma_core(x);
  // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
  return kPi / (std::sin(kPi * x) * gamma_core(1.0 - x));
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x >= 0.5) return 1.0 / gamma_core(x);
  return std::sin(kPi * x) * gamma_core(1.0 - x) / kPi;
}

SeriesResult pfq(std::span<const double> a, std::span<const double> b, double z,
                 double tol) {
  if (tol <= 0.0) throw std::domain_error("pfq: tol must be positive");
  for (double bm : b)
    if (is_nonpositive_integer(bm))
      throw std::domain_error("pfq: lower parameter is a nonpositive integer");
  if (a.size() > b.size() + 1 && z != 0.0)
    throw std::domain_error("pfq: divergent series (p > q + 1)");
  if (a.size() == b.size() + 1 && std::abs(z) >= 1.0)
    throw std::domain_error("pfq: |z| >= 1 with p = q + 1");

  if (z == 0.0) return {1.0, 1, 0.0, false};

  Kahan sum;
  sum.add(1.0);
  double term = 1.0;
  double max_partial = 1.0;
  double abs_sum = 1.0;
  int terms = 1;
  int calm = 0;
  for (long k = 0; k < 1'000'000; ++k) {
    double ratio = z / (k + 1);
    for (double ai : a) ratio *= ai + k;
    for (double bj : b) ratio /= bj + k;
    term *= ratio;
    sum.add(term);
    ++terms;
    abs_sum += std::abs(term);
    max_partial = std::max(max_partial, std::abs(sum.sum));
    if (term == 0.0 || std::abs(term) < tol * std::abs(sum.sum)) {
      if (++calm == 3) break;
    } else {
      calm = 0;
    }
    if (k == 1'000'000 - 1)
      throw std::runtime_error("pfq: series failed to converge");
  }

  SeriesResult res;
  res.value = sum.sum;
  res.terms_used = terms;
  res.est_abs_error = kEps * abs_sum + std::abs(term);
  res.cancellation_flag = max_partial > 1e8 * std::abs(res.value);
  return res;
}

double hyp2f1_safe(double a, double b, double c, double z) {
  if (is_nonpositive_integer(c))
    throw std::domain_error("hyp2f1: c is a nonpositive integer");
  if (z >= 1.0) throw std::domain_error("hyp2f1: requires z < 1");
  if (z == 0.0) return 1.0;

  // Terminating polynomial case works at any z < 1.
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b))
    return gauss_series(a, b, c, z);

  if (z > 0.0) {
    if (z > 1.0 - 1e-12)
      throw std::domain_error("hyp2f1: z too close to 1, series diverges");
    return gauss_series(a, b, c, z);
  }

  const double w = z / (z - 1.0);  // in (0, 1) for z < 0
  if (z >= -1.0) {
    // Pfaff transformation, keeping the smaller upper parameter outside.
    if (std::abs(a) <= std::abs(b))
      return std::pow(1.0 - z, -a) * gauss_series(a, c - b, c, w);
    return std::pow(1.0 - z, -b) * gauss_series(b, c - a, c, w);
  }

  // z < -1: 1/z connection formula unless a - b is integral.
  const double ab = a - b;
  if (std::abs(ab - std::nearbyint(ab)) > 1e-8) {
    const double gc = gamma(c);
    const double t1 = gc * gamma(b - a) * rgamma(b) * rgamma(c - a) *
                      std::pow(-z, -a) *
                      gauss_series(a, 1.0 - c + a, 1.0 - b + a, 1.0 / z);
    const double t2 = gc * gamma(a - b) * rgamma(a) * rgamma(c - b) *
                      std::pow(-z, -b) *
                      gauss_series(b, 1.0 - c + b, 1.0 - a + b, 1.0 / z);
    return t1 + t2;
  }
  // Degenerate connection coefficients; Pfaff still converges (|w| < 1).
  if (std::abs(a) <= std::abs(b))
    return std::pow(1.0 - z, -a) * gauss_series(a, c - b, c, w);
  return std::pow(1.0 - z, -b) * gauss_series(b, c - a, c, w);
}

double hyp1f1_safe(double a, double b, double z) {
  if (is_nonpositive_integer(b))
    throw std::domain_error("hyp1f1: b is a nonpositive integer");
  if (z == 0.0) return 1.0;
  if (z < 0.0) return std::exp(z) * kummer_series(b - a, b, -z);
  return kummer_series(a, b, z);
}

namespace {

using detail::TwoDouble;
using detail::td_add;
using detail::td_div_d;
using detail::td_mul;
using detail::td_mul_d;
using detail::two_prod;

constexpr double kBesselSeriesRange = 15.0;

// Ascending series for integer orders 0 and 1, with two-double terms so the
// switch point stays well below 1e-12 absolute error.
double bessel_series(int n, double x) {
  TwoDouble term = (n == 0) ? TwoDouble{1.0, 0.0} : td_mul_d({x, 0.0}, 0.5);
  const TwoDouble q = td_mul_d(two_prod(x, x), -0.25);
  TwoDouble sum = term;
  for (int k = 1; k < 200; ++k) {
    term = td_div_d(td_mul(term, q), static_cast<double>(k) * (k + n));
    sum = td_add(sum, term);
    if (std::abs(term.hi) < 1e-24 * (1.0 + std::abs(sum.hi))) break;
  }
  return sum.hi + sum.lo;
}

// Slowly varying amplitude factors of the Hankel expansion, x > 15;
// truncated at the smallest term.
void hankel_amplitudes(int n, double x, double* p_out, double* q_out) {
  const double mu = 4.0 * n * n;
  double t = 1.0;
  double p = 1.0, q = 0.0;
  int sign_p = -1, sign_q = 1;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = t * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(t)) break;
    t = next;
    if (k % 2 == 1) {
      q += sign_q * t;
      sign_q = -sign_q;
    } else {
      p += sign_p * t;
      sign_p = -sign_p;
    }
    if (std::abs(t) < 1e-19) break;
  }
  *p_out = p;
  *q_out = q;
}

double bessel_asymptotic(int n, double x) {
  double p, q;
  hankel_amplitudes(n, x, &p, &q);
  const double chi = x - (0.5 * n + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(double nu, double x) {
  if (x < 0.0) throw std::domain_error("bessel_j: requires x >= 0");
  if (nu == 0.5) {
    if (x == 0.0) return 0.0;
    return std::sqrt(2.0 / (kPi * x)) * std::sin(x);
  }
  if (nu == -0.5) {
    if (x == 0.0)
      throw std::domain_error("bessel_j: order -1/2 is singular at x = 0");
    return std::sqrt(2.0 / (kPi * x)) * std::cos(x);
  }
  if (nu == 0.0 || nu == 1.0) {
    const int n = static_cast<int>(nu);
    return (x <= kBesselSeriesRange) ? bessel_series(n, x)
                                     : bessel_asymptotic(n, x);
  }
  throw std::domain_error("bessel_j: unsupported order nu = " +
                          std::to_string(nu));
}

double bessel_j_phase(double nu, std::int64_t k, double phi) {
  const double x = static_cast<double>(k) * kPi + phi;
  const double parity = (k % 2 == 0) ? 1.0 : -1.0;
  if (nu == 0.5) {
    if (x == 0.0) return 0.0;
    return std::sqrt(2.0 / (kPi * x)) * parity * std::sin(phi);
  }
  if (nu == -0.5) {
    if (x == 0.0)
      throw std::domain_error("bessel_j_phase: order -1/2 singular at 0");
    return std::sqrt(2.0 / (kPi * x)) * parity * std::cos(phi);
  }
  if (nu == 0.0 || nu == 1.0) {
    const int n = static_cast<int>(nu);
    if (x <= kBesselSeriesRange) return bessel_series(n, x);
    double p, q;
    hankel_amplitudes(n, x, &p, &q);
    // chi = x - (n/2 + 1/4) pi; with x = k pi + phi the phase reduces to
    // parity * (phi - shift) and stays exact at any magnitude of x.
    const double shift = (0.5 * n + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * x)) * parity *
           (p * std::cos(phi - shift) - q * std::sin(phi - shift));
  }
  throw std::domain_error("bessel_j_phase: unsupported order nu = " +
                          std::to_string(nu));
}

namespace {

constexpr double kMomentSeriesRadius = 12.0;  // matches bessel_j series range

// Closed hypergeometric form of the moment integral, accurate for r <= 12.
double bessel_moment_closed(double lambda, double nu, double r) {
  if (r == 0.0) return 0.0;
  const double p = lambda + nu + 1.0;
  const double a[1] = {0.5 * p};
  const double b[2] = {nu + 1.0, 0.5 * p + 1.0};
  const SeriesResult s = pfq(a, b, -0.25 * r * r, 1e-16);
  return std::pow(r, p) / (std::pow(2.0, nu) * p * gamma(nu + 1.0)) * s.value;
}

}  // namespace

double bessel_moment(double lambda, double nu, double r) {
  if (r < 0.0) throw std::domain_error("bessel_moment: requires r >= 0");
  if (lambda + nu <= -1.0)
    throw std::domain_error("bessel_moment: requires lambda + nu > -1");
  if (!(nu == -0.5 || nu == 0.0 || nu == 0.5 || nu == 1.0))
    throw std::domain_error("bessel_moment: unsupported order");

  if (r <= kMomentSeriesRadius) return bessel_moment_closed(lambda, nu, r);

  Kahan acc;
  acc.add(bessel_moment_closed(lambda, nu, kMomentSeriesRadius));
  const auto& rule = quad::gauss_legendre(20);
  const auto f = [lambda, nu](double t) {
    return std::pow(t, lambda) * bessel_j(nu, t);
  };
  double lo = kMomentSeriesRadius;
  while (lo < r) {
    const double hi = std::min(lo + kPi, r);
    acc.add(quad::integrate(f, lo, hi, rule));
    lo = hi;
  }
  return acc.sum;
}

}  // namespace fraclap::specfun
