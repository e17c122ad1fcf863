// Command-line front end: weight dumps, operator application with error
// reporting, elliptic solves, and the benchmark suites, all with
// deterministic CSV/JSON output (timing isolated in its own block).

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numbers>

#include "fraclap/bench.hpp"
#include "fraclap/grid.hpp"
#include "fraclap/operator.hpp"
#include "fraclap/solver.hpp"
#include "fraclap/weights.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitNumericalFailure = 4;

struct Options {
  double alpha = 0.5;
  std::vector<double> alphas;
  int dim = 1;
  double h = 0.25;
  std::vector<double> hs;
  std::vector<double> domain;  // lo,hi
  std::string example = "ex1";
  std::string problem = "poisson";
  std::string suite;
  double s = 4.0;
  double a = 1.0;
  double lambda1 = 0.5;
  double alpha2 = 2.0;
  double tol = 1e-12;
  double extent = 0.0;
  double ref_h = 1.0 / 512;
  std::int64_t max_lag = 16;
  std::string out;
  std::string format = "csv";
};

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json effective_config(const Options& opt, const std::string& cmd) {
  nlohmann::json cfg;
  cfg["command"] = cmd;
  cfg["alpha"] = opt.alpha;
  if (!opt.alphas.empty()) cfg["alphas"] = opt.alphas;
  cfg["dim"] = opt.dim;
  cfg["h"] = opt.h;
  if (!opt.hs.empty()) cfg["hs"] = opt.hs;
  if (!opt.domain.empty()) cfg["domain"] = opt.domain;
  cfg["example"] = opt.example;
  cfg["problem"] = opt.problem;
  if (!opt.suite.empty()) cfg["suite"] = opt.suite;
  cfg["s"] = opt.s;
  cfg["a"] = opt.a;
  cfg["lambda1"] = opt.lambda1;
  cfg["alpha2"] = opt.alpha2;
  cfg["tol"] = opt.tol;
  cfg["extent"] = opt.extent;
  cfg["tau_ext"] = 1e-16;
  cfg["ref_h"] = opt.ref_h;
  cfg["max_lag"] = opt.max_lag;
  const char* cache = std::getenv("FRACLAP_CACHE_DIR");
  cfg["cache_dir"] = cache ? cache : "";
  return cfg;
}

void write_text_atomic(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open output " + path);
    out << body;
  }
  std::filesystem::rename(tmp, path);
}

std::pair<double, double> domain_bounds(const Options& opt, double dflt_lo,
                                        double dflt_hi) {
  if (opt.domain.empty()) return {dflt_lo, dflt_hi};
  if (opt.domain.size() != 2)
    throw CLI::ValidationError("--domain expects lo,hi");
  return {opt.domain[0], opt.domain[1]};
}

int cmd_weights(const Options& opt) {
  std::vector<int> extents(opt.dim, static_cast<int>(opt.max_lag) + 1);
  const fraclap::weights::WeightTable table =
      fraclap::weights::build_table(opt.alpha, opt.h, opt.dim, extents);
  if (opt.out.empty()) {
    std::printf("alpha,d,sq_lag,omega_at_h1\n");
    std::vector<std::int64_t> keys;
    for (const auto& [m, v] : table.values) keys.push_back(m);
    std::sort(keys.begin(), keys.end());
    const double to_unit = std::pow(table.h, table.alpha);
    for (std::int64_t m : keys)
      std::printf("%s,%d,%lld,%s\n", format17(table.alpha).c_str(), table.dim,
                  static_cast<long long>(m),
                  format17(table.at(m) * to_unit).c_str());
  } else {
    fraclap::weights::write_weight_csv(table, opt.out);
  }
  return kExitOk;
}

int cmd_apply(const Options& opt) {
  using namespace fraclap;
  const double alpha = opt.alpha;
  GridSpec spec;
  GridFunction<double> u;
  std::function<double(double)> exact;  // 1D oracle if available

  if (opt.example == "ex1") {
    auto [lo, hi] = domain_bounds(opt, -12.0, 12.0);
    spec = GridSpec::open_box(lo, hi, opt.h, 1);
    u = sample(
        [](const Eigen::Vector3d& x) {
          return std::pow(1.0 + x[0] * x[0], -7.0);
        },
        spec);
    if (alpha > 0.0)
      exact = [alpha](double x) { return bench::exact_ex1(alpha, x); };
    else
      exact = [](double x) { return std::pow(1.0 + x * x, -7.0); };
  } else if (opt.example == "ex2") {
    auto [lo, hi] = domain_bounds(opt, -opt.a, opt.a);
    spec = GridSpec::open_box(lo, hi, opt.h, 1);
    const double s = opt.s, a = opt.a;
    u = sample(
        [s, a](const Eigen::Vector3d& x) {
          const double t = a * a - x[0] * x[0];
          return t > 0.0 ? std::pow(t, s) : 0.0;
        },
        spec);
    exact = [alpha, s, a](double x) {
      return bench::exact_ex2(alpha, s, a, x);
    };
  } else if (opt.example == "ex3") {
    auto [lo, hi] = domain_bounds(opt, -1.0, 1.0);
    spec = GridSpec::open_box(lo, hi, opt.h, 2);
    const double s = opt.s;
    u = sample(
        [s](const Eigen::Vector3d& x) {
          const double tx = 1.0 - x[0] * x[0], ty = 1.0 - x[1] * x[1];
          return (tx > 0.0 && ty > 0.0) ? std::pow(tx * ty, s) : 0.0;
        },
        spec);
  } else {
    throw CLI::ValidationError("unknown --example " + opt.example);
  }

  const FracLapOperator op = build_operator(alpha, spec);
  const GridFunction<double> v = apply_fft(op, u);
  if (!opt.out.empty()) save_grid_csv(v, opt.out);

  nlohmann::json result;
  result["config"] = effective_config(opt, "apply");
  if (exact) {
    double linf = 0.0, sq = 0.0;
    std::int64_t count = 0;
    for (std::int64_t j = 0; j < spec.total(); ++j) {
      const double x = spec.point(j)[0];
      if (!(x > -1.0 + 1e-12 && x < 1.0 - 1e-12)) continue;
      const double e = std::abs(v.data[j] - exact(x));
      linf = std::max(linf, e);
      sq += e * e;
      ++count;
    }
    result["error_linf_omega"] = linf;
    result["error_l2_omega"] = std::sqrt(spec.h * sq);
    result["omega_points"] = count;
  }
  std::cout << result.dump(2) << '\n';
  return kExitOk;
}

fraclap::EllipticProblem make_problem(const Options& opt) {
  using namespace fraclap;
  EllipticProblem prob;
  const double alpha = opt.alpha, s = opt.s, a = opt.a;
  if (opt.problem == "poisson") {
    auto [lo, hi] = domain_bounds(opt, -1.0, 1.0);
    prob.terms = {{1.0, alpha}};
    prob.domain = GridSpec::open_box(lo, hi, opt.h, 1);
    prob.rhs = [alpha, s](const Eigen::Vector3d& x) {
      return bench::exact_poisson_pair(alpha, s, x[0]).second;
    };
  } else if (opt.problem == "elliptic2") {
    auto [lo, hi] = domain_bounds(opt, -1.5, 1.5);
    prob.terms = {{1.0, alpha}};
    prob.reaction = 1.0;
    prob.domain = GridSpec::open_box(lo, hi, opt.h, 2);
    prob.rhs = [alpha, a](const Eigen::Vector3d& x) {
      return bench::exact_ex522_pair(alpha, a, x).second;
    };
    prob.exterior = [a](const Eigen::Vector3d& x) {
      return std::exp(-a * a * (x[0] * x[0] + x[1] * x[1]));
    };
    prob.exterior_extent = opt.extent;
  } else if (opt.problem == "coexist") {
    auto [lo, hi] = domain_bounds(opt, -1.0, 1.0);
    prob.terms = {{opt.lambda1, alpha}, {1.0 - opt.lambda1, opt.alpha2}};
    prob.domain = GridSpec::open_box(lo, hi, opt.h, 2);
    prob.rhs = [](const Eigen::Vector3d& x) {
      return bench::coexistence_rhs(x);
    };
  } else {
    throw CLI::ValidationError("unknown --problem " + opt.problem);
  }
  return prob;
}

int cmd_solve(const Options& opt) {
  using namespace fraclap;
  const EllipticProblem prob = make_problem(opt);
  const SolveReport rep = solve(prob, opt.tol, -1);

  nlohmann::json report;
  report["config"] = effective_config(opt, "solve");
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [c, al] : prob.terms)
    terms.push_back({{"coefficient", c}, {"alpha", al}});
  report["terms"] = terms;
  report["reaction"] = prob.reaction;
  report["h"] = prob.domain.h;
  report["extents"] = std::vector<int>(
      prob.domain.extents.begin(), prob.domain.extents.begin() + prob.domain.dim);
  report["tol"] = opt.tol;
  report["iterations"] = rep.iterations;
  report["relative_residual"] = rep.relative_residual;
  report["matvec_count"] = rep.matvec_count;
  report["converged"] = rep.converged;
  report["truncation"] = {{"L", rep.truncation_extent},
                          {"tau_ext", rep.tau_ext}};
  report["timing"] = {{"wall_time_ms", rep.wall_time_sec * 1e3}};

  if (opt.problem == "poisson" || opt.problem == "elliptic2") {
    double linf = 0.0, sq = 0.0;
    for (std::int64_t j = 0; j < prob.domain.total(); ++j) {
      const Eigen::Vector3d x = prob.domain.point(j);
      const double ue =
          opt.problem == "poisson"
              ? bench::exact_poisson_pair(opt.alpha, opt.s, x[0]).first
              : bench::exact_ex522_pair(opt.alpha, opt.a, x).first;
      const double e = std::abs(rep.solution.data[j] - ue);
      linf = std::max(linf, e);
      sq += e * e;
    }
    report["error_linf_omega"] = linf;
    report["error_l2_omega"] =
        std::sqrt(std::pow(prob.domain.h, prob.domain.dim) * sq);
  }

  if (!opt.out.empty()) {
    save_grid_csv(rep.solution, opt.out);
    std::filesystem::path p(opt.out);
    p.replace_extension(".report.json");
    write_text_atomic(p.string(), report.dump(2) + "\n");
  }
  std::cout << report.dump(2) << '\n';
  return rep.converged ? kExitOk : kExitNoConvergence;
}

int cmd_bench(const Options& opt) {
  using namespace fraclap;
  std::vector<bench::ConvergenceReport> reports;
  const std::vector<double> table_alphas =
      opt.alphas.empty() ? std::vector<double>{0.5, 1.0, 1.7, 2.0} : opt.alphas;

  if (opt.suite == "table1") {
    bench::OperatorBenchConfig cfg;
    cfg.example = "ex1";
    cfg.alphas = table_alphas;
    cfg.hs = opt.hs.empty() ? std::vector<double>{0.5, 0.25, 0.125, 0.0625}
                            : opt.hs;
    reports = bench::run_operator_bench(cfg);
  } else if (opt.suite == "table3") {
    bench::OperatorBenchConfig cfg;
    cfg.example = "ex2";
    cfg.alphas = table_alphas;
    cfg.hs = opt.hs.empty()
                 ? std::vector<double>{0.125, 0.0625, 0.03125, 0.015625,
                                       0.0078125, 0.00390625}
                 : opt.hs;
    cfg.s = opt.s;
    cfg.a = opt.a;
    reports = bench::run_operator_bench(cfg);
  } else if (opt.suite == "table4" || opt.suite == "table5") {
    bench::OperatorBenchConfig cfg;
    cfg.example = "ex3";
    cfg.alphas = table_alphas;
    cfg.hs = opt.hs.empty()
                 ? std::vector<double>{0.125, 0.0625, 0.03125, 0.015625}
                 : opt.hs;
    cfg.s = (opt.suite == "table4") ? 2.0 : 4.0;
    cfg.ref_h = opt.ref_h;
    reports = bench::run_operator_bench(cfg);
  } else if (opt.suite == "table6") {
    bench::SolverBenchConfig cfg;
    cfg.problem = "elliptic2";
    cfg.alphas = table_alphas;
    cfg.hs = opt.hs.empty() ? std::vector<double>{0.125, 0.0625, 0.03125}
                            : opt.hs;
    cfg.a = (opt.a == 1.0) ? 6.0 : opt.a;
    cfg.tol = std::min(opt.tol, 1e-13);
    reports = bench::run_solver_bench(cfg);
  } else if (opt.suite == "fig2") {
    bench::SolverBenchConfig cfg;
    cfg.problem = "poisson";
    cfg.alphas =
        opt.alphas.empty() ? std::vector<double>{0.5, 1.0, 1.5} : opt.alphas;
    cfg.hs = opt.hs.empty() ? std::vector<double>{1.0 / 64, 1.0 / 128,
                                                  1.0 / 256, 1.0 / 512}
                            : opt.hs;
    cfg.s_is_half_alpha = true;
    cfg.tol = opt.tol;
    reports = bench::run_solver_bench(cfg);
  } else if (opt.suite == "fig6") {
    for (auto [al, s] : std::vector<std::pair<double, double>>{
             {1.0, 2.0}, {1.0, 4.0}, {0.5, 3.0}}) {
      bench::SolverBenchConfig cfg;
      cfg.problem = "poisson";
      cfg.alphas = {al};
      cfg.hs = opt.hs.empty()
                   ? std::vector<double>{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}
                   : opt.hs;
      cfg.s = s;
      cfg.tol = opt.tol;
      auto part = bench::run_solver_bench(cfg);
      reports.insert(reports.end(), part.begin(), part.end());
    }
  } else if (opt.suite == "coexist") {
    const double h = opt.hs.empty() ? 1.0 / 64 : opt.hs[0];
    nlohmann::json rows = nlohmann::json::array();
    for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      Options o = opt;
      o.problem = "coexist";
      o.lambda1 = lam;
      o.h = h;
      EllipticProblem prob = make_problem(o);
      const SolveReport rep = solve(prob, opt.tol, 100000);
      if (!rep.converged) return kExitNoConvergence;
      const double mass = std::pow(norm_l2(rep.solution), 2);
      rows.push_back(
          {{"lambda1", lam}, {"mass", mass}, {"iterations", rep.iterations}});
    }
    nlohmann::json out;
    out["config"] = effective_config(opt, "bench");
    out["suite"] = "coexist";
    out["rows"] = rows;
    const std::string body = out.dump(2) + "\n";
    if (!opt.out.empty())
      write_text_atomic(opt.out, body);
    else
      std::cout << body;
    return kExitOk;
  } else {
    throw CLI::ValidationError("unknown --suite " + opt.suite);
  }

  if (opt.out.empty()) {
    for (const auto& rep : reports)
      for (const auto& row : rep.rows)
        std::printf("%s,%s,%s,%s,%s,%s\n", rep.example.c_str(),
                    format17(rep.alpha).c_str(), rep.norm.c_str(),
                    format17(row.h).c_str(), format17(row.error).c_str(),
                    std::isnan(row.rate) ? "" : format17(row.rate).c_str());
  } else if (opt.format == "json") {
    bench::write_report_json(reports, opt.out);
  } else {
    bench::write_report_csv(reports, opt.out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraclap: semi-discrete spectral fractional Laplacian toolkit"};
  app.require_subcommand(1);
  Options opt;

  app.set_help_flag("--help", "print help");
  const auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--alpha", opt.alpha, "fractional power");
    sub->add_option("--alphas", opt.alphas, "list of fractional powers")
        ->delimiter(',');
    sub->add_option("--dim", opt.dim, "dimension (1..3)")
        ->check(CLI::Range(1, 3));
    sub->add_option("--h", opt.h, "grid spacing")->check(CLI::PositiveNumber);
    sub->add_option("--hs", opt.hs, "list of spacings")->delimiter(',');
    sub->add_option("--domain", opt.domain, "box bounds lo,hi")->delimiter(',');
    sub->add_option("--s", opt.s, "regularity parameter s");
    sub->add_option("--a", opt.a, "scale parameter a");
    sub->add_option("--lambda1", opt.lambda1, "mixture coefficient");
    sub->add_option("--alpha2", opt.alpha2, "second mixture power");
    sub->add_option("--tol", opt.tol, "solver tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--extent", opt.extent,
                    "exterior truncation half-width L");
    sub->add_option("--ref-h", opt.ref_h, "reference spacing for ex3");
    sub->add_option("--out", opt.out, "output path");
    sub->add_option("--format", opt.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* weights = app.add_subcommand("weights", "dump scheme weights as CSV");
  add_common(weights);
  weights->add_option("--max-lag", opt.max_lag, "largest per-axis lag");

  auto* apply = app.add_subcommand("apply", "apply the discrete operator");
  add_common(apply);
  apply->add_option("--example", opt.example, "ex1|ex2|ex3");

  auto* solvec = app.add_subcommand("solve", "solve an elliptic problem");
  add_common(solvec);
  solvec->add_option("--problem", opt.problem, "poisson|elliptic2|coexist");

  auto* benchc = app.add_subcommand("bench", "run a benchmark suite");
  add_common(benchc);
  benchc
      ->add_option("--suite", opt.suite,
                   "table1|table3|table4|table5|table6|fig2|fig6|coexist")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    if (app.got_subcommand("weights")) {
      if (!(opt.alpha >= 0.0))
        throw CLI::ValidationError("alpha must be >= 0");
      return cmd_weights(opt);
    }
    if (app.got_subcommand("apply")) return cmd_apply(opt);
    if (app.got_subcommand("solve")) {
      if (!(opt.alpha > 0.0 && opt.alpha <= 2.0))
        throw CLI::ValidationError("solve requires alpha in (0, 2]");
      return cmd_solve(opt);
    }
    if (app.got_subcommand("bench")) return cmd_bench(opt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
  return kExitBadConfig;
}
