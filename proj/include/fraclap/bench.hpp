#pragma once

#include <Eigen/Core>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fraclap::bench {

/// Exact fractional Laplacian of the inverse multiquadric (1+x^2)^(-7).
double exact_ex1(double alpha, double x);

/// Exact fractional Laplacian of the compact bump (a^2-x^2)_+^s, |x| < a.
double exact_ex2(double alpha, double s, double a, double x);

/// Exact (solution, right-hand side) pair of the 1D fractional Poisson
/// problem with solution proportional to x (1-x^2)_+^s.
std::pair<double, double> exact_poisson_pair(double alpha, double s, double x);

/// Exact (solution, right-hand side) pair of the 2D elliptic problem with
/// Gaussian solution e^{-a^2 |x|^2} and reaction term +u.
std::pair<double, double> exact_ex522_pair(double alpha, double a,
                                           const Eigen::Vector3d& x);

/// Right-hand side of the 2D normal/anomalous coexistence problem.
double coexistence_rhs(const Eigen::Vector3d& x);

/// rate_i = log2(e_{i-1} / e_i) for strictly halving spacings.
std::vector<double> rates(std::span<const double> errors,
                          std::span<const double> hs);

struct ConvergenceRow {
  double h = 0.0;
  double error = 0.0;
  double rate = 0.0;  // NaN on the coarsest row
};

struct ConvergenceReport {
  std::string example;
  double alpha = 0.0;
  std::string norm;  // "linf" or "l2"
  std::vector<ConvergenceRow> rows;
  std::map<std::string, double> meta;
};

struct OperatorBenchConfig {
  std::string example;  // ex1 | ex2 | ex3
  std::vector<double> alphas;
  std::vector<double> hs;  // descending, halving
  double omega_lo = -1.0, omega_hi = 1.0;
  double sample_lo = 0.0, sample_hi = 0.0;  // 0,0: per-example default
  double s = 4.0;
  double a = 1.0;
  double ref_h = 0.0;  // ex3 reference spacing (required there)
};

/// Operator accuracy sweep: applies the scheme, compares against the exact
/// oracle (ex1, ex2) or a fine-grid reference (ex3), and reports errors in
/// both norms restricted to the box (omega_lo, omega_hi)^d.
std::vector<ConvergenceReport> run_operator_bench(const OperatorBenchConfig&);

struct SolverBenchConfig {
  std::string problem;  // poisson | elliptic2
  std::vector<double> alphas;
  std::vector<double> hs;
  double s = 2.0;
  bool s_is_half_alpha = false;  // benchmark regularity s = alpha/2
  double a = 6.0;
  double tol = 1e-13;
  int max_iter = 200000;
};

std::vector<ConvergenceReport> run_solver_bench(const SolverBenchConfig&);

/// Report CSV: `example,alpha,norm,h,error,rate` (rate empty on the coarsest
/// row); floats carry 17 significant digits.
void write_report_csv(std::span<const ConvergenceReport> reports,
                      const std::string& path);
void write_report_json(std::span<const ConvergenceReport> reports,
                       const std::string& path);

}  // namespace fraclap::bench
