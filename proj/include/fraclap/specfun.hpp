#pragma once

#include <cstdint>
#include <span>

namespace fraclap::specfun {

/// Outcome of a hypergeometric series summation.
///
/// `est_abs_error` bounds the combined truncation + round-off error of the
/// compensated sum.  `cancellation_flag` is raised when the largest partial
/// sum exceeded the final value by more than 1e8, i.e. the result has lost
/// at least ~8 significant digits to alternating-series cancellation and
/// callers should prefer an independent evaluation route.
struct SeriesResult {
  double value = 0.0;
  int terms_used = 0;
  double est_abs_error = 0.0;
  bool cancellation_flag = false;
};

/// Gamma function for real arguments, poles at 0, -1, -2, ... rejected.
/// Lanczos approximation, reflection formula below 1/2.
double gamma(double x);

/// 1/Gamma(x); returns 0 at the poles instead of throwing.
double rgamma(double x);

/// Generalized hypergeometric series sum_k [prod (a_i)_k / prod (b_j)_k] z^k / k!.
///
/// Direct Pochhammer-ratio summation with compensated accumulation; stops
/// once three consecutive terms fall below tol * |partial sum|.
/// Throws std::domain_error when the series diverges (p > q+1 with z != 0,
/// or p == q+1 with |z| >= 1) or some b_j is a nonpositive integer.
SeriesResult pfq(std::span<const double> a, std::span<const double> b, double z,
                 double tol);

/// Gauss hypergeometric 2F1(a,b;c;z) for real z < 1.
///
/// Uses the Pfaff transformation on z in [-1,0), the 1/z connection formula
/// for z < -1 (Pfaff fallback when the connection coefficients degenerate),
/// and the direct series on [0,1).
double hyp2f1_safe(double a, double b, double c, double z);

/// Confluent hypergeometric 1F1(a;b;z); Kummer transform for z < 0 so the
/// summation never alternates.
double hyp1f1_safe(double a, double b, double z);

/// Bessel function of the first kind, orders -1/2, 0, 1/2, 1 only.
/// Half-integer orders use their trigonometric closed forms; J0 and J1 use
/// the ascending series up to x = 12 and the Hankel asymptotic expansion
/// beyond.
double bessel_j(double nu, double x);

/// bessel_j at x = k*pi + phi with the oscillation phase carried through the
/// trigonometric factors exactly (parity of k times a small-argument cosine
/// or sine). Large-argument panel quadrature loses ~ulp(x) of phase through
/// a direct bessel_j(x) call; this entry point does not.
double bessel_j_phase(double nu, std::int64_t k, double phi);

/// Moment integral of the Bessel function, int_0^r t^lambda J_nu(t) dt,
/// requiring lambda + nu > -1 and an order supported by bessel_j.
///
/// Closed hypergeometric form up to r = 12; beyond that, fixed-order
/// Gauss-Legendre panels of half-period length accumulate the oscillatory
/// remainder.
double bessel_moment(double lambda, double nu, double r);

}  // namespace fraclap::specfun
