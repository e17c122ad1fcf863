#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "fraclap/grid.hpp"
#include "fraclap/operator.hpp"

namespace fraclap {

/// Elliptic problem sum_i c_i (-Lap)^(alpha_i/2) u + reaction * u = f on a
/// box domain, with exterior data g prescribed on the complement (empty
/// callable means homogeneous). The exterior sum is truncated to the band
/// |x|_inf <= exterior_extent; a nonpositive extent requests automatic growth
/// until |g| drops below tau_ext.
struct EllipticProblem {
  std::vector<std::pair<double, double>> terms;  // (coefficient, alpha)
  double reaction = 0.0;
  GridSpec domain;
  std::function<double(const Eigen::Vector3d&)> rhs;
  std::function<double(const Eigen::Vector3d&)> exterior;
  double exterior_extent = 0.0;
  double tau_ext = 1e-16;
};

struct SolveReport {
  GridFunction<double> solution;
  int iterations = 0;
  double relative_residual = 0.0;
  std::int64_t matvec_count = 0;
  double wall_time_sec = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
  double truncation_extent = 0.0;  // effective L of the exterior band
  double tau_ext = 0.0;
};

/// b_k = f(x_k) minus the lifted exterior contribution
/// sum_i c_i sum_{j exterior} omega_{alpha_i}(|k-j|) g(x_j).
GridFunction<double> assemble_rhs(const EllipticProblem& p);

/// Matrix-free conjugate gradients on the restricted operator (FFT matvec,
/// constant-diagonal Jacobi preconditioning). Non-convergence is reported
/// through converged == false with the residual history attached, never by
/// silently accepting the iterate.
/// max_iter < 0 selects the default 10 * sqrt(N).
SolveReport solve(const EllipticProblem& p, double tol = 1e-12,
                  int max_iter = -1);

/// Direct factorization of the dense restricted matrix (N <= 4096); the
/// validation oracle for `solve`.
GridFunction<double> solve_dense(const EllipticProblem& p);

}  // namespace fraclap
