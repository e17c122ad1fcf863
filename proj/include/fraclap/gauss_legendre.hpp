#pragma once

#include <Eigen/Core>

namespace fraclap::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
};

/// Nodes and weights for an n-point rule, computed once per order by Newton
/// iteration on the Legendre recurrence and cached.
const GaussRule& gauss_legendre(int n);

/// Integrate f over [a, b] with the given rule.
template <class F>
double integrate(F&& f, double a, double b, const GaussRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

}  // namespace fraclap::quad
