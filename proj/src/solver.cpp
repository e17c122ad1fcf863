#include "fraclap/solver.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fraclap {

namespace {

void validate(const EllipticProblem& p) {
  if (p.terms.empty())
    throw std::invalid_argument("EllipticProblem: needs at least one term");
  double coef_sum = 0.0;
  for (const auto& [c, alpha] : p.terms) {
    if (c < 0.0)
      throw std::invalid_argument("EllipticProblem: negative coefficient");
    if (!(alpha > 0.0 && alpha <= 2.0))
      throw std::invalid_argument("EllipticProblem: alpha must be in (0, 2]");
    coef_sum += c;
  }
  if (!(coef_sum > 0.0 || p.reaction > 0.0))
    throw std::invalid_argument("EllipticProblem: operator vanishes");
  if (p.reaction < 0.0)
    throw std::invalid_argument("EllipticProblem: negative reaction");
  if (!p.rhs) throw std::invalid_argument("EllipticProblem: missing rhs");
}

// Half-width (in lattice steps from the origin) of the domain box.
std::int64_t domain_reach(const GridSpec& s) {
  std::int64_t reach = 0;
  for (int a = 0; a < s.dim; ++a) {
    const auto lo = static_cast<std::int64_t>(std::llround(s.origin[a] / s.h));
    const std::int64_t hi = lo + s.extents[a] - 1;
    reach = std::max({reach, std::abs(lo), std::abs(hi)});
  }
  return reach;
}

// Max |g| over the lattice shell |j|_inf == k.
double shell_max(const std::function<double(const Eigen::Vector3d&)>& g,
                 double h, int dim, std::int64_t k) {
  double best = 0.0;
  const auto probe = [&](std::int64_t i0, std::int64_t i1, std::int64_t i2) {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    x[0] = i0 * h;
    if (dim > 1) x[1] = i1 * h;
    if (dim > 2) x[2] = i2 * h;
    best = std::max(best, std::abs(g(x)));
  };
  if (dim == 1) {
    probe(k, 0, 0);
    probe(-k, 0, 0);
    return best;
  }
  if (dim == 2) {
    for (std::int64_t t = -k; t <= k; ++t) {
      probe(k, t, 0);
      probe(-k, t, 0);
      probe(t, k, 0);
      probe(t, -k, 0);
    }
    return best;
  }
  for (std::int64_t s = -k; s <= k; ++s)
    for (std::int64_t t = -k; t <= k; ++t) {
      probe(k, s, t);
      probe(-k, s, t);
      probe(s, k, t);
      probe(s, -k, t);
      probe(s, t, k);
      probe(s, t, -k);
    }
  return best;
}

std::int64_t band_halfwidth(const EllipticProblem& p) {
  const std::int64_t reach = domain_reach(p.domain);
  if (p.exterior_extent > 0.0) {
    const auto k = static_cast<std::int64_t>(
        std::floor(p.exterior_extent / p.domain.h + 1e-9));
    return std::max(k, reach);
  }
  std::int64_t k = reach + 1;
  for (; k < reach + 100000; ++k)
    if (shell_max(p.exterior, p.domain.h, p.domain.dim, k) < p.tau_ext) break;
  if (k == reach + 100000)
    throw std::runtime_error(
        "assemble_rhs: exterior data does not decay below tau_ext; set "
        "exterior_extent explicitly");
  return k;
}

}  // namespace

GridFunction<double> assemble_rhs(const EllipticProblem& p) {
  validate(p);
  GridFunction<double> b = sample(p.rhs, p.domain);
  if (!p.exterior) return b;

  const std::int64_t k_band = band_halfwidth(p);
  const double h = p.domain.h;
  GridSpec band;
  band.h = h;
  band.dim = p.domain.dim;
  for (int a = 0; a < band.dim; ++a) {
    band.extents[a] = static_cast<int>(2 * k_band + 1);
    band.origin[a] = -static_cast<double>(k_band) * h;
  }

  // Exterior data on the band, zero on the interior grid.
  GridFunction<double> g_band = sample(p.exterior, band);
  std::array<std::int64_t, 3> off{0, 0, 0};
  for (int a = 0; a < band.dim; ++a)
    off[a] = std::llround((p.domain.origin[a] - band.origin[a]) / h);
  const std::int64_t n = p.domain.total();
  std::vector<std::int64_t> band_index(n);
  for (std::int64_t j = 0; j < n; ++j) {
    const auto ji = p.domain.unflatten(j);
    std::int64_t flat = 0;
    for (int a = 0; a < band.dim; ++a)
      flat = flat * band.extents[a] + (ji[a] + off[a]);
    band_index[j] = flat;
    g_band.data[flat] = 0.0;
  }

  for (const auto& [c, alpha] : p.terms) {
    if (c == 0.0) continue;
    const FracLapOperator op = build_operator(alpha, band);
    const GridFunction<double> lift = apply_fft(op, g_band);
    for (std::int64_t j = 0; j < n; ++j)
      b.data[j] -= c * lift.data[band_index[j]];
  }
  return b;
}

SolveReport solve(const EllipticProblem& p, double tol, int max_iter) {
  validate(p);
  if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport report;
  report.tau_ext = p.tau_ext;
  report.truncation_extent = p.exterior ? band_halfwidth(p) * p.domain.h : 0.0;

  const GridFunction<double> b = assemble_rhs(p);
  const std::int64_t n = p.domain.total();
  if (max_iter < 0)
    max_iter = 10 * static_cast<int>(std::ceil(std::sqrt(double(n))));

  std::vector<FracLapOperator> ops;
  ops.reserve(p.terms.size());
  for (const auto& [c, alpha] : p.terms)
    if (c != 0.0) ops.push_back(build_operator(alpha, p.domain));
  std::vector<double> coefs;
  for (const auto& [c, alpha] : p.terms)
    if (c != 0.0) coefs.push_back(c);

  double diag = p.reaction;
  for (std::size_t i = 0; i < ops.size(); ++i)
    diag += coefs[i] * ops[i].table.at(0);

  const auto matvec = [&](const GridFunction<double>& x) {
    GridFunction<double> y(p.domain);
    y.data = p.reaction * x.data;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const GridFunction<double> t = apply_fft(ops[i], x);
      y.data += coefs[i] * t.data;
    }
    ++report.matvec_count;
    return y;
  };

  const double bnorm = b.data.matrix().norm();
  GridFunction<double> x(p.domain);
  if (bnorm == 0.0) {
    report.solution = x;
    report.converged = true;
    report.relative_residual = 0.0;
    report.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
  }

  // Preconditioned CG; the Jacobi diagonal of a Toeplitz operator is a
  // constant, so M is a scalar.
  Eigen::ArrayXd r = b.data;
  Eigen::ArrayXd z = r / diag;
  Eigen::ArrayXd pdir = z;
  double rz = (r * z).sum();
  double rel = 1.0;
  for (int it = 1; it <= max_iter; ++it) {
    GridFunction<double> pg(p.domain);
    pg.data = pdir;
    const GridFunction<double> ap = matvec(pg);
    const double p_ap = (pdir * ap.data).sum();
    if (!(p_ap > 0.0)) {
      report.iterations = it;
      break;  // loss of positive definiteness at round-off level
    }
    const double step = rz / p_ap;
    x.data += step * pdir;
    r -= step * ap.data;
    rel = std::sqrt((r * r).sum()) / bnorm;
    report.residual_history.push_back(rel);
    report.iterations = it;
    if (rel <= tol) {
      report.converged = true;
      break;
    }
    z = r / diag;
    const double rz_new = (r * z).sum();
    pdir = z + (rz_new / rz) * pdir;
    rz = rz_new;
  }
  report.relative_residual = rel;
  report.solution = std::move(x);
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

GridFunction<double> solve_dense(const EllipticProblem& p) {
  validate(p);
  const std::int64_t n = p.domain.total();
  if (n > 4096)
    throw std::invalid_argument("solve_dense: N must be <= 4096, got " +
                                std::to_string(n));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [c, alpha] : p.terms) {
    if (c == 0.0) continue;
    const FracLapOperator op = build_operator(alpha, p.domain);
    a += c * dense_matrix(op);
  }
  a.diagonal().array() += p.reaction;

  const GridFunction<double> b = assemble_rhs(p);
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("solve_dense: Cholesky factorization failed");
  GridFunction<double> x(p.domain);
  x.data = llt.solve(b.data.matrix()).array();
  return x;
}

}  // namespace fraclap
