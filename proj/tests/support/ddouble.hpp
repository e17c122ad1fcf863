#pragma once

// Test-only double-double arithmetic (~31 significant digits), used by the
// extended-precision reference oracles. Deliberately independent of the
// library implementation paths it is used to check.

#include <cmath>
#include <cstdlib>

namespace testsupport {

struct DD {
  double hi = 0.0, lo = 0.0;
  DD() = default;
  DD(double h) : hi(h), lo(0.0) {}
  DD(double h, double l) : hi(h), lo(l) {}
};

inline DD dd_norm(double h, double l) {
  const double s = h + l;
  return {s, l - (s - h)};
}

inline DD operator+(DD a, DD b) {
  double s = a.hi + b.hi;
  const double v = s - a.hi;
  double e = (a.hi - (s - v)) + (b.hi - v);
  e += a.lo + b.lo;
  return dd_norm(s, e);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
  const double p = a.hi * b.hi;
  double e = std::fma(a.hi, b.hi, -p);
  e += a.hi * b.lo + a.lo * b.hi;
  return dd_norm(p, e);
}

inline DD operator/(DD a, DD b) {
  const double q1 = a.hi / b.hi;
  DD r = a - b * DD(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * DD(q2);
  const double q3 = r.hi / b.hi;
  return dd_norm(q1, q2) + DD(q3);
}

inline double to_double(DD a) { return a.hi + a.lo; }

inline DD dd_abs(DD a) { return a.hi < 0 ? -a : a; }

// exp by argument reduction to |r| <= ln2/2 and a Taylor series.
inline DD dd_exp(DD x) {
  const DD ln2{0.6931471805599453, 2.3190468138462996e-17};
  const int k = static_cast<int>(std::lround(to_double(x) / ln2.hi));
  const DD r = x - ln2 * DD(static_cast<double>(k));
  DD term{1.0}, sum{1.0};
  for (int n = 1; n < 40; ++n) {
    term = term * r / DD(static_cast<double>(n));
    sum = sum + term;
    if (std::abs(term.hi) < 1e-36) break;
  }
  return sum * DD(std::ldexp(1.0, k));
}

}  // namespace testsupport
