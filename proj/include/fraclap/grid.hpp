#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fraclap {

/// Uniform lattice x_j = origin + j*h per axis, row-major linearization with
/// axis 0 slowest (index = (i0*N1 + i1)*N2 + i2). Unused trailing axes have
/// extent 1 and origin 0.
struct GridSpec {
  double h = 1.0;
  int dim = 1;
  std::array<int, 3> extents{1, 1, 1};
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  std::int64_t total() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim; ++a) n *= extents[a];
    return n;
  }

  /// Coordinate of a per-axis index; single expression so every module
  /// reproduces x_j to the ulp.
  double coord(int axis, std::int64_t index) const {
    return origin[axis] + static_cast<double>(index) * h;
  }

  std::array<std::int64_t, 3> unflatten(std::int64_t flat) const {
    std::array<std::int64_t, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = flat % extents[a];
      flat /= extents[a];
    }
    return idx;
  }

  Eigen::Vector3d point(std::int64_t flat) const {
    const auto idx = unflatten(flat);
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    for (int a = 0; a < dim; ++a) x[a] = coord(a, idx[a]);
    return x;
  }

  bool operator==(const GridSpec& o) const {
    return h == o.h && dim == o.dim && extents == o.extents &&
           origin == o.origin;
  }

  /// Lattice points of h*Z^d strictly inside the open box (lo, hi)^d.
  static GridSpec open_box(double lo, double hi, double h, int dim);
};

/// Values on a GridSpec in row-major index order; a plain value type.
template <class Scalar = double>
struct GridFunction {
  GridSpec spec;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> data;

  GridFunction() = default;
  explicit GridFunction(const GridSpec& s)
      : spec(s), data(Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(s.total())) {}
};

/// Pointwise evaluation u_j = f(x_j); rejects non-finite samples naming the
/// offending point.
template <class F>
GridFunction<double> sample(F&& f, const GridSpec& spec) {
  GridFunction<double> u(spec);
  for (std::int64_t j = 0; j < spec.total(); ++j) {
    const Eigen::Vector3d x = spec.point(j);
    const double v = f(x);
    if (!std::isfinite(v))
      throw std::runtime_error("sample: non-finite value at x = (" +
                               std::to_string(x[0]) + ", " +
                               std::to_string(x[1]) + ", " +
                               std::to_string(x[2]) + ")");
    u.data[j] = v;
  }
  return u;
}

template <class Scalar>
double norm_linf(const GridFunction<Scalar>& u) {
  return u.data.abs().maxCoeff();
}

template <class Scalar>
double norm_l2(const GridFunction<Scalar>& u) {
  return std::pow(u.spec.h, 0.5 * u.spec.dim) * u.data.matrix().norm();
}

template <class S1, class S2>
std::complex<double> inner(const GridFunction<S1>& u, const GridFunction<S2>& v) {
  if (!(u.spec == v.spec))
    throw std::invalid_argument("inner: grid specs do not match");
  std::complex<double> acc = 0.0;
  for (std::int64_t j = 0; j < u.spec.total(); ++j)
    acc += std::complex<double>(u.data[j]) * std::conj(std::complex<double>(v.data[j]));
  return std::pow(u.spec.h, u.spec.dim) * acc;
}

/// Truncated semi-discrete Fourier transform h^d sum_j u_j e^{-i xi . x_j};
/// xi must lie in the fundamental cell [-pi/h, pi/h]^d.
template <class Scalar>
std::complex<double> semi_discrete_ft(const GridFunction<Scalar>& u,
                                      const Eigen::Vector3d& xi) {
  const double cell = std::numbers::pi / u.spec.h;
  for (int a = 0; a < u.spec.dim; ++a)
    if (std::abs(xi[a]) > cell * (1.0 + 1e-12))
      throw std::domain_error("semi_discrete_ft: xi outside [-pi/h, pi/h]^d");
  std::complex<double> acc = 0.0;
  for (std::int64_t j = 0; j < u.spec.total(); ++j) {
    const Eigen::Vector3d x = u.spec.point(j);
    double phase = 0.0;
    for (int a = 0; a < u.spec.dim; ++a) phase += xi[a] * x[a];
    acc += std::complex<double>(u.data[j]) *
           std::exp(std::complex<double>(0.0, -phase));
  }
  return std::pow(u.spec.h, u.spec.dim) * acc;
}

/// CSV serialization (`index...,x...,value` header) with a GridSpec JSON
/// sidecar next to it (same stem, .json extension).
void save_grid_csv(const GridFunction<double>& u, const std::string& path);
GridFunction<double> load_grid_csv(const std::string& path);

}  // namespace fraclap
