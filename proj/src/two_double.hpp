#pragma once

#include <cmath>

// Minimal two-double (compensated pair) arithmetic for summations whose
// intermediate magnitudes exceed the result by many orders. Internal header.
namespace fraclap::detail {

struct TwoDouble {
  double hi = 0.0, lo = 0.0;
};

inline TwoDouble two_sum(double a, double b) {
  const double s = a + b;
  const double t = s - a;
  return {s, (a - (s - t)) + (b - t)};
}

inline TwoDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline TwoDouble td_add(TwoDouble a, TwoDouble b) {
  TwoDouble s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return two_sum(s.hi, s.lo);
}

inline TwoDouble td_add_d(TwoDouble a, double b) {
  TwoDouble s = two_sum(a.hi, b);
  s.lo += a.lo;
  return two_sum(s.hi, s.lo);
}

inline TwoDouble td_mul(TwoDouble a, TwoDouble b) {
  TwoDouble p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return two_sum(p.hi, p.lo);
}

inline TwoDouble td_mul_d(TwoDouble a, double b) {
  TwoDouble p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return two_sum(p.hi, p.lo);
}

inline TwoDouble td_div_d(TwoDouble a, double b) {
  const double q1 = a.hi / b;
  const TwoDouble p = two_prod(q1, b);
  const double r = ((a.hi - p.hi) - p.lo) + a.lo;
  return two_sum(q1, r / b);
}

inline TwoDouble td_div(TwoDouble a, TwoDouble b) {
  const double q1 = a.hi / b.hi;
  const TwoDouble r = td_add(a, td_mul_d(b, -q1));
  const double q2 = r.hi / b.hi;
  return two_sum(q1, q2);
}

}  // namespace fraclap::detail
