#include "fraclap/bench.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>
#include <stdexcept>

#include "fraclap/operator.hpp"
#include "fraclap/solver.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap::bench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Flat indices of grid points strictly inside the box (lo, hi)^d.
std::vector<std::int64_t> box_indices(const GridSpec& s, double lo, double hi) {
  const double tol = 1e-9 * s.h;
  std::vector<std::int64_t> out;
  for (std::int64_t j = 0; j < s.total(); ++j) {
    const auto idx = s.unflatten(j);
    bool inside = true;
    for (int a = 0; a < s.dim && inside; ++a) {
      const double x = s.coord(a, idx[a]);
      inside = x > lo + tol && x < hi - tol;
    }
    if (inside) out.push_back(j);
  }
  return out;
}

struct ErrorPair {
  double linf = 0.0;
  double l2 = 0.0;
};

ErrorPair norms_on(const GridFunction<double>& diff,
                   std::span<const std::int64_t> idx) {
  ErrorPair e;
  double sq = 0.0;
  for (std::int64_t j : idx) {
    const double v = std::abs(diff.data[j]);
    e.linf = std::max(e.linf, v);
    sq += v * v;
  }
  e.l2 = std::sqrt(std::pow(diff.spec.h, diff.spec.dim) * sq);
  return e;
}

void append_reports(std::vector<ConvergenceReport>& reports,
                    const std::string& example, double alpha,
                    const std::vector<double>& hs,
                    const std::vector<double>& linf,
                    const std::vector<double>& l2,
                    const std::map<std::string, double>& meta) {
  const std::vector<double> r_inf = rates(linf, hs);
  const std::vector<double> r_l2 = rates(l2, hs);
  ConvergenceReport a{example, alpha, "linf", {}, meta};
  ConvergenceReport b{example, alpha, "l2", {}, meta};
  for (std::size_t i = 0; i < hs.size(); ++i) {
    a.rows.push_back({hs[i], linf[i], i == 0 ? kNaN : r_inf[i - 1]});
    b.rows.push_back({hs[i], l2[i], i == 0 ? kNaN : r_l2[i - 1]});
  }
  reports.push_back(std::move(a));
  reports.push_back(std::move(b));
}

}  // namespace

double exact_ex1(double alpha, double x) {
  if (!(alpha > 0.0)) throw std::domain_error("exact_ex1: requires alpha > 0");
  const double pref = std::pow(2.0, alpha) *
                      specfun::gamma(0.5 * (1.0 + alpha)) *
                      specfun::gamma(7.0 + 0.5 * alpha) /
                      (720.0 * std::sqrt(kPi));
  return pref * specfun::hyp2f1_safe(0.5 * (alpha + 1.0), 7.0 + 0.5 * alpha,
                                     0.5, -x * x);
}

double exact_ex2(double alpha, double s, double a, double x) {
  if (!(alpha >= 0.0)) throw std::domain_error("exact_ex2: requires alpha >= 0");
  if (!(std::abs(x) < a))
    throw std::domain_error("exact_ex2: requires |x| < a");
  const double pref = std::pow(2.0, alpha) *
                      specfun::gamma(0.5 * (alpha + 1.0)) *
                      specfun::gamma(s + 1.0) * std::pow(a, 2.0 * s - alpha) /
                      (std::sqrt(kPi) * specfun::gamma(s + 1.0 - 0.5 * alpha));
  return pref * specfun::hyp2f1_safe(0.5 * (alpha + 1.0), -s + 0.5 * alpha,
                                     0.5, x * x / (a * a));
}

std::pair<double, double> exact_poisson_pair(double alpha, double s, double x) {
  if (std::abs(x) > 1.0)
    throw std::domain_error("exact_poisson_pair: requires |x| <= 1");
  const double u =
      (std::abs(x) >= 1.0)
          ? 0.0
          : std::sqrt(kPi) * specfun::gamma(s + 1.0 - 0.5 * alpha) /
                (std::pow(2.0, alpha + 1.0) * specfun::gamma(s + 1.0) *
                 specfun::gamma(0.5 * (3.0 + alpha))) *
                x * std::pow(1.0 - x * x, s);
  // The hypergeometric argument is clipped inside the unit interval so the
  // boundary points stay evaluable: at z this close to 1 the Gauss series
  // needs ~(1-z)^-1 terms, so the clip is set where a direct summation still
  // terminates. Grid points of every bench satisfy x^2 <= (1-h)^2 and are
  // never clipped.
  const double z = std::min(x * x, 1.0 - 1e-4);
  const double f =
      x * specfun::hyp2f1_safe(0.5 * (3.0 + alpha), -s + 0.5 * alpha, 1.5, z);
  return {u, f};
}

std::pair<double, double> exact_ex522_pair(double alpha, double a,
                                           const Eigen::Vector3d& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1];
  const double u = std::exp(-a * a * r2);
  const double f = std::pow(2.0 * a, alpha) *
                       specfun::gamma(1.0 + 0.5 * alpha) *
                       specfun::hyp1f1_safe(1.0 + 0.5 * alpha, 1.0,
                                            -a * a * r2) +
                   u;
  return {u, f};
}

double coexistence_rhs(const Eigen::Vector3d& x) {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
  if (r >= 1.0) return 0.0;
  const double c = std::cos(1.5 * kPi * r);
  return std::exp(-r * r) * c * c * c * c;
}

std::vector<double> rates(std::span<const double> errors,
                          std::span<const double> hs) {
  if (errors.size() != hs.size())
    throw std::invalid_argument("rates: errors/hs size mismatch");
  for (std::size_t i = 1; i < hs.size(); ++i)
    if (std::abs(hs[i - 1] / hs[i] - 2.0) > 1e-9)
      throw std::invalid_argument("rates: spacings must halve");
  std::vector<double> out;
  for (std::size_t i = 1; i < errors.size(); ++i)
    out.push_back(std::log2(errors[i - 1] / errors[i]));
  return out;
}

namespace {

std::vector<ConvergenceReport> bench_ex1_ex2(const OperatorBenchConfig& cfg) {
  const bool is_ex1 = cfg.example == "ex1";
  double lo = cfg.sample_lo, hi = cfg.sample_hi;
  if (lo == 0.0 && hi == 0.0) {
    if (is_ex1) {
      lo = -12.0;  // (1+x^2)^-7 tail below 1e-15 outside
      hi = 12.0;
    } else {
      lo = -cfg.a;
      hi = cfg.a;
    }
  }

  std::vector<ConvergenceReport> reports;
  for (double alpha : cfg.alphas) {
    std::vector<double> linf, l2;
    for (double h : cfg.hs) {
      const GridSpec spec = GridSpec::open_box(lo, hi, h, 1);
      const GridFunction<double> u = sample(
          [&](const Eigen::Vector3d& x) {
            if (is_ex1) return std::pow(1.0 + x[0] * x[0], -7.0);
            const double t = cfg.a * cfg.a - x[0] * x[0];
            return t > 0.0 ? std::pow(t, cfg.s) : 0.0;
          },
          spec);
      const FracLapOperator op = build_operator(alpha, spec);
      const GridFunction<double> v = apply_fft(op, u);
      GridFunction<double> diff(spec);
      for (std::int64_t j = 0; j < spec.total(); ++j) {
        const double x = spec.point(j)[0];
        const double exact = is_ex1 ? exact_ex1(alpha, x)
                                    : exact_ex2(alpha, cfg.s, cfg.a, x);
        diff.data[j] = v.data[j] - exact;
      }
      const auto idx = box_indices(spec, cfg.omega_lo, cfg.omega_hi);
      const ErrorPair e = norms_on(diff, idx);
      linf.push_back(e.linf);
      l2.push_back(e.l2);
    }
    std::map<std::string, double> meta;
    meta["sample_lo"] = lo;
    meta["sample_hi"] = hi;
    if (!is_ex1) {
      meta["s"] = cfg.s;
      meta["a"] = cfg.a;
    }
    append_reports(reports, cfg.example, alpha, cfg.hs, linf, l2, meta);
  }
  return reports;
}

std::vector<ConvergenceReport> bench_ex3(const OperatorBenchConfig& cfg) {
  if (!(cfg.ref_h > 0.0))
    throw std::invalid_argument("run_operator_bench: ex3 needs ref_h");
  for (double h : cfg.hs)
    if (cfg.ref_h > 0.25 * h * (1.0 + 1e-12))
      throw std::invalid_argument(
          "run_operator_bench: reference spacing must be finer than min(hs)/4");

  const auto u_fn = [&](const Eigen::Vector3d& x) {
    const double tx = 1.0 - x[0] * x[0];
    const double ty = 1.0 - x[1] * x[1];
    return (tx > 0.0 && ty > 0.0) ? std::pow(tx * ty, cfg.s) : 0.0;
  };

  std::vector<ConvergenceReport> reports;
  const GridSpec ref_spec = GridSpec::open_box(-1.0, 1.0, cfg.ref_h, 2);
  for (double alpha : cfg.alphas) {
    const GridFunction<double> ref_u = sample(u_fn, ref_spec);
    const FracLapOperator ref_op = build_operator(alpha, ref_spec);
    const GridFunction<double> ref_v = apply_fft(ref_op, ref_u);

    std::vector<double> linf, l2;
    for (double h : cfg.hs) {
      const GridSpec spec = GridSpec::open_box(-1.0, 1.0, h, 2);
      const auto ratio = static_cast<std::int64_t>(std::llround(h / cfg.ref_h));
      if (std::abs(h - ratio * cfg.ref_h) > 1e-12 * h)
        throw std::invalid_argument(
            "run_operator_bench: hs must be integer multiples of ref_h");
      const GridFunction<double> u = sample(u_fn, spec);
      const FracLapOperator op = build_operator(alpha, spec);
      const GridFunction<double> v = apply_fft(op, u);

      std::array<std::int64_t, 3> off{0, 0, 0};
      for (int a = 0; a < 2; ++a)
        off[a] = std::llround((spec.origin[a] - ref_spec.origin[a]) / cfg.ref_h);
      GridFunction<double> diff(spec);
      for (std::int64_t j = 0; j < spec.total(); ++j) {
        const auto ji = spec.unflatten(j);
        std::int64_t flat = 0;
        for (int a = 0; a < 2; ++a)
          flat = flat * ref_spec.extents[a] + (ji[a] * ratio + off[a]);
        diff.data[j] = v.data[j] - ref_v.data[flat];
      }
      const auto idx = box_indices(spec, cfg.omega_lo, cfg.omega_hi);
      const ErrorPair e = norms_on(diff, idx);
      linf.push_back(e.linf);
      l2.push_back(e.l2);
    }
    std::map<std::string, double> meta;
    meta["s"] = cfg.s;
    meta["ref_h"] = cfg.ref_h;
    append_reports(reports, "ex3", alpha, cfg.hs, linf, l2, meta);
  }
  return reports;
}

}  // namespace

std::vector<ConvergenceReport> run_operator_bench(
    const OperatorBenchConfig& cfg) {
  if (cfg.example == "ex1" || cfg.example == "ex2") return bench_ex1_ex2(cfg);
  if (cfg.example == "ex3") return bench_ex3(cfg);
  throw std::invalid_argument("run_operator_bench: unknown example " +
                              cfg.example);
}

std::vector<ConvergenceReport> run_solver_bench(const SolverBenchConfig& cfg) {
  std::vector<ConvergenceReport> reports;
  if (cfg.problem == "poisson") {
    for (double alpha : cfg.alphas) {
      const double s = cfg.s_is_half_alpha ? 0.5 * alpha : cfg.s;
      std::vector<double> linf, l2;
      for (double h : cfg.hs) {
        EllipticProblem prob;
        prob.terms = {{1.0, alpha}};
        prob.domain = GridSpec::open_box(-1.0, 1.0, h, 1);
        prob.rhs = [alpha, s](const Eigen::Vector3d& x) {
          return exact_poisson_pair(alpha, s, x[0]).second;
        };
        const SolveReport rep = solve(prob, cfg.tol, cfg.max_iter);
        if (!rep.converged)
          throw std::runtime_error("run_solver_bench: CG stalled at rel " +
                                   std::to_string(rep.relative_residual));
        GridFunction<double> diff(prob.domain);
        for (std::int64_t j = 0; j < prob.domain.total(); ++j) {
          const double x = prob.domain.point(j)[0];
          diff.data[j] =
              rep.solution.data[j] - exact_poisson_pair(alpha, s, x).first;
        }
        const auto idx = box_indices(prob.domain, -1.0, 1.0);
        const ErrorPair e = norms_on(diff, idx);
        linf.push_back(e.linf);
        l2.push_back(e.l2);
      }
      std::map<std::string, double> meta{{"s", s}};
      append_reports(reports, "poisson", alpha, cfg.hs, linf, l2, meta);
    }
    return reports;
  }
  if (cfg.problem == "elliptic2") {
    for (double alpha : cfg.alphas) {
      std::vector<double> linf, l2;
      for (double h : cfg.hs) {
        EllipticProblem prob;
        prob.terms = {{1.0, alpha}};
        prob.reaction = 1.0;
        prob.domain = GridSpec::open_box(-1.5, 1.5, h, 2);
        const double a = cfg.a;
        prob.rhs = [alpha, a](const Eigen::Vector3d& x) {
          return exact_ex522_pair(alpha, a, x).second;
        };
        prob.exterior = [a](const Eigen::Vector3d& x) {
          return std::exp(-a * a * (x[0] * x[0] + x[1] * x[1]));
        };
        const SolveReport rep = solve(prob, cfg.tol, cfg.max_iter);
        if (!rep.converged)
          throw std::runtime_error("run_solver_bench: CG stalled at rel " +
                                   std::to_string(rep.relative_residual));
        GridFunction<double> diff(prob.domain);
        for (std::int64_t j = 0; j < prob.domain.total(); ++j) {
          const Eigen::Vector3d x = prob.domain.point(j);
          diff.data[j] =
              rep.solution.data[j] - exact_ex522_pair(alpha, a, x).first;
        }
        const auto idx = box_indices(prob.domain, -1.5, 1.5);
        const ErrorPair e = norms_on(diff, idx);
        linf.push_back(e.linf);
        l2.push_back(e.l2);
      }
      std::map<std::string, double> meta{{"a", cfg.a}};
      append_reports(reports, "elliptic2", alpha, cfg.hs, linf, l2, meta);
    }
    return reports;
  }
  throw std::invalid_argument("run_solver_bench: unknown problem " +
                              cfg.problem);
}

void write_report_csv(std::span<const ConvergenceReport> reports,
                      const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("write_report_csv: cannot open " + path);
    out << "example,alpha,norm,h,error,rate\n";
    for (const auto& rep : reports)
      for (const auto& row : rep.rows) {
        out << rep.example << ',' << format17(rep.alpha) << ',' << rep.norm
            << ',' << format17(row.h) << ',' << format17(row.error) << ',';
        if (!std::isnan(row.rate)) out << format17(row.rate);
        out << '\n';
      }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("write_report_csv: rename failed");
}

void write_report_json(std::span<const ConvergenceReport> reports,
                       const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rep : reports) {
    nlohmann::json jr;
    jr["example"] = rep.example;
    jr["alpha"] = rep.alpha;
    jr["norm"] = rep.norm;
    jr["meta"] = rep.meta;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rep.rows) {
      nlohmann::json r;
      r["h"] = row.h;
      r["error"] = row.error;
      if (!std::isnan(row.rate)) r["rate"] = row.rate;
      rows.push_back(std::move(r));
    }
    jr["rows"] = std::move(rows);
    arr.push_back(std::move(jr));
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out)
      throw std::runtime_error("write_report_json: cannot open " + path);
    out << arr.dump(2) << '\n';
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("write_report_json: rename failed");
}

}  // namespace fraclap::bench
