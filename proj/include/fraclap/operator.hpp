#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <memory>

#include "fraclap/fft.hpp"
#include "fraclap/grid.hpp"
#include "fraclap/weights.hpp"

namespace fraclap {

/// Discrete fractional Laplacian on a GridSpec: a d-level Toeplitz operator
/// generated by the weight table, with a cached circulant embedding so that
/// applications run through FFTs of per-axis size M_i = smallest 7-smooth
/// integer >= 2 N_i - 1. Immutable after construction; apply_* may be called
/// concurrently on a shared operator.
struct FracLapOperator {
  double alpha = 0.0;
  GridSpec spec;
  weights::WeightTable table;
  std::array<int, 3> embed{1, 1, 1};
  Eigen::ArrayXcd circ_spectrum;  // imaginary residue zeroed after planning
  std::array<std::shared_ptr<const fft::Dft>, 3> plans{};
};

FracLapOperator build_operator(double alpha, const GridSpec& spec);

/// Direct weighted summation over the stored grid (zero off-grid extension);
/// O(N^2) reference path.
GridFunction<double> apply_dense(const FracLapOperator& op,
                                 const GridFunction<double>& u);

/// Circulant-embedding application: zero-pad, transform, multiply by the
/// cached spectrum, transform back, crop.
GridFunction<double> apply_fft(const FracLapOperator& op,
                               const GridFunction<double>& u);

/// Dense matrix of the operator restricted to the grid (row = output index,
/// column = input index); the validation path for symmetry/SPD checks.
Eigen::MatrixXd dense_matrix(const FracLapOperator& op);

/// Truncated semi-discrete symbol estimate: sum over lags |k_a| <= K of
/// omega(|k|) e^{-i xi . k h}, which approaches |xi|^alpha as K grows.
/// For d = 1 the weight row is generated in one cumulative sweep, so large K
/// stays affordable.
double symbol_probe(const FracLapOperator& op, const Eigen::Vector3d& xi,
                    std::int64_t halfwidth);

}  // namespace fraclap
