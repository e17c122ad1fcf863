#include "fraclap/operator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fraclap {

namespace {

// Per-axis circulant lag of an embedding index: i for the leading block,
// i - M for the trailing wrap, and "outside" (no table entry) in the gap.
std::int64_t circulant_lag(std::int64_t i, int n, int m) {
  if (i <= n - 1) return i;
  if (i >= m - (n - 1)) return i - m;
  return m;  // sentinel: gap region, weight 0
}

}  // namespace

FracLapOperator build_operator(double alpha, const GridSpec& spec) {
  FracLapOperator op;
  op.alpha = alpha;
  op.spec = spec;
  op.table = weights::build_table(
      alpha, spec.h, spec.dim,
      std::span<const int>(spec.extents.data(), spec.dim));

  std::int64_t embed_total = 1;
  for (int a = 0; a < spec.dim; ++a) {
    op.embed[a] = fft::next_smooth7(2 * spec.extents[a] - 1);
    op.plans[a] = fft::plan(op.embed[a]);
    embed_total *= op.embed[a];
  }

  // Generating sequence of the d-level circulant.
  std::vector<std::complex<double>> gen(embed_total, 0.0);
  const int d = spec.dim;
  std::array<std::int64_t, 3> idx{0, 0, 0};
  for (std::int64_t flat = 0; flat < embed_total; ++flat) {
    std::int64_t rem = flat;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = rem % op.embed[a];
      rem /= op.embed[a];
    }
    std::int64_t m = 0;
    bool inside = true;
    for (int a = 0; a < d && inside; ++a) {
      const std::int64_t lag = circulant_lag(idx[a], spec.extents[a], op.embed[a]);
      if (lag == op.embed[a])
        inside = false;
      else
        m += lag * lag;
    }
    if (inside) gen[flat] = op.table.at(m);
  }

  fft::dft_nd(std::span<const int>(op.embed.data(), d), gen.data(), false);

  // The generating sequence is real and even, so the spectrum is real up to
  // round-off; verify and zero the residue.
  double max_real = 0.0, max_imag = 0.0;
  for (const auto& v : gen) {
    max_real = std::max(max_real, std::abs(v.real()));
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  if (max_imag > 1e-10 * max_real)
    throw std::runtime_error(
        "build_operator: circulant spectrum has unexpected imaginary part");
  op.circ_spectrum.resize(embed_total);
  for (std::int64_t i = 0; i < embed_total; ++i)
    op.circ_spectrum[i] = std::complex<double>(gen[i].real(), 0.0);
  return op;
}

GridFunction<double> apply_dense(const FracLapOperator& op,
                                 const GridFunction<double>& u) {
  if (!(u.spec == op.spec))
    throw std::invalid_argument("apply_dense: grid spec mismatch");
  const GridSpec& s = op.spec;
  const std::int64_t n = s.total();

  // Dense per-m array speeds up the inner lookup.
  std::vector<double> by_m(static_cast<std::size_t>(op.table.max_sq_lag) + 1,
                           0.0);
  for (const auto& [m, v] : op.table.values)
    by_m[static_cast<std::size_t>(m)] = v;

  GridFunction<double> out(s);
  for (std::int64_t k = 0; k < n; ++k) {
    const auto ki = s.unflatten(k);
    double acc = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      const auto ji = s.unflatten(j);
      std::int64_t m = 0;
      for (int a = 0; a < s.dim; ++a) {
        const std::int64_t dl = ki[a] - ji[a];
        m += dl * dl;
      }
      acc += by_m[static_cast<std::size_t>(m)] * u.data[j];
    }
    out.data[k] = acc;
  }
  return out;
}

GridFunction<double> apply_fft(const FracLapOperator& op,
                               const GridFunction<double>& u) {
  if (!(u.spec == op.spec))
    throw std::invalid_argument("apply_fft: grid spec mismatch");
  if (op.alpha == 0.0) return u;  // exact identity, no round trip
  const GridSpec& s = op.spec;
  const int d = s.dim;

  std::int64_t embed_total = 1;
  for (int a = 0; a < d; ++a) embed_total *= op.embed[a];
  std::vector<std::complex<double>> buf(embed_total, 0.0);

  // Zero-padded copy of u into the leading corner of the embedding.
  const std::int64_t n = s.total();
  for (std::int64_t j = 0; j < n; ++j) {
    const auto ji = s.unflatten(j);
    std::int64_t flat = 0;
    for (int a = 0; a < d; ++a) flat = flat * op.embed[a] + ji[a];
    buf[flat] = u.data[j];
  }

  const std::span<const int> ext(op.embed.data(), d);
  fft::dft_nd(ext, buf.data(), false);
  for (std::int64_t i = 0; i < embed_total; ++i) buf[i] *= op.circ_spectrum[i];
  fft::dft_nd(ext, buf.data(), true);

  GridFunction<double> out(s);
  for (std::int64_t j = 0; j < n; ++j) {
    const auto ji = s.unflatten(j);
    std::int64_t flat = 0;
    for (int a = 0; a < d; ++a) flat = flat * op.embed[a] + ji[a];
    out.data[j] = buf[flat].real();
  }
  return out;
}

Eigen::MatrixXd dense_matrix(const FracLapOperator& op) {
  const GridSpec& s = op.spec;
  const std::int64_t n = s.total();
  std::vector<double> by_m(static_cast<std::size_t>(op.table.max_sq_lag) + 1,
                           0.0);
  for (const auto& [m, v] : op.table.values)
    by_m[static_cast<std::size_t>(m)] = v;

  Eigen::MatrixXd mat(n, n);
  for (std::int64_t k = 0; k < n; ++k) {
    const auto ki = s.unflatten(k);
    for (std::int64_t j = 0; j < n; ++j) {
      const auto ji = s.unflatten(j);
      std::int64_t m = 0;
      for (int a = 0; a < s.dim; ++a) {
        const std::int64_t dl = ki[a] - ji[a];
        m += dl * dl;
      }
      mat(k, j) = by_m[static_cast<std::size_t>(m)];
    }
  }
  return mat;
}

double symbol_probe(const FracLapOperator& op, const Eigen::Vector3d& xi,
                    std::int64_t halfwidth) {
  const double h = op.spec.h;
  const double cell = std::numbers::pi / h;
  for (int a = 0; a < op.spec.dim; ++a)
    if (std::abs(xi[a]) > cell * (1.0 + 1e-12))
      throw std::domain_error("symbol_probe: xi outside [-pi/h, pi/h]^d");

  if (op.spec.dim == 1) {
    const std::vector<double> row =
        weights::weight_row(op.alpha, h, halfwidth);
    double acc = row[0];
    double carry = 0.0;
    for (std::int64_t k = 1; k <= halfwidth; ++k) {
      const double term =
          2.0 * row[static_cast<std::size_t>(k)] * std::cos(xi[0] * k * h);
      const double y = term - carry;
      const double t = acc + y;
      carry = (t - acc) - y;
      acc = t;
    }
    return acc;
  }

  // Higher dimensions: direct lattice sum, practical for moderate halfwidth.
  const int d = op.spec.dim;
  std::array<int, 3> ext{1, 1, 1};
  std::vector<int> ext_v(d, static_cast<int>(halfwidth) + 1);
  const weights::WeightTable table =
      weights::build_table(op.alpha, h, d, ext_v);
  (void)ext;
  double acc = 0.0;
  std::array<std::int64_t, 3> k{0, 0, 0};
  const std::int64_t side = 2 * halfwidth + 1;
  std::int64_t count = 1;
  for (int a = 0; a < d; ++a) count *= side;
  for (std::int64_t flat = 0; flat < count; ++flat) {
    std::int64_t rem = flat;
    for (int a = d - 1; a >= 0; --a) {
      k[a] = rem % side - halfwidth;
      rem /= side;
    }
    std::int64_t m = 0;
    double phase = 0.0;
    for (int a = 0; a < d; ++a) {
      m += k[a] * k[a];
      phase += xi[a] * k[a] * h;
    }
    acc += table.at(m) * std::cos(phase);
  }
  return acc;
}

}  // namespace fraclap
