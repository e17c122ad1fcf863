#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fraclap/bench.hpp"
#include "fraclap/grid.hpp"
#include "fraclap/operator.hpp"
#include "fraclap/specfun.hpp"
#include "support/reference_oracles.hpp"

using namespace fraclap;
namespace sf = fraclap::specfun;

namespace {
constexpr double kPi = std::numbers::pi;
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("exact_ex1 center value equals the Gamma prefactor") {
  for (double alpha : {0.5, 1.0, 1.7, 2.0}) {
    const double pref = std::pow(2.0, alpha) * sf::gamma(0.5 * (1.0 + alpha)) *
                        sf::gamma(7.0 + 0.5 * alpha) /
                        (720.0 * std::sqrt(kPi));
    CHECK(rel(bench::exact_ex1(alpha, 0.0), pref) < 1e-14);
    CHECK(bench::exact_ex1(alpha, 0.35) == bench::exact_ex1(alpha, -0.35));
  }
  CHECK_THROWS_AS(bench::exact_ex1(0.0, 0.5), std::domain_error);
}

TEST_CASE("exact_ex1 at alpha = 2 matches the classical second derivative") {
  for (double x : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const double classical =
        (14.0 - 210.0 * x * x) * std::pow(1.0 + x * x, -9.0);
    CHECK(rel(bench::exact_ex1(2.0, x), classical) < 1e-12);
  }
}

TEST_CASE("exact_ex1 against the Fourier quadrature oracle") {
  for (double x : {0.0, 0.5, 1.0}) {
    const double ref = testsupport::ex1_fourier_oracle(0.5, x);
    CHECK(rel(bench::exact_ex1(0.5, x), ref) < 1e-10);
  }
}

TEST_CASE("exact_ex2 reductions") {
  // alpha = 0 reduces to the function itself
  for (double x : {0.0, 0.3, 0.9}) {
    CHECK(rel(bench::exact_ex2(0.0, 4.0, 1.0, x),
              std::pow(1.0 - x * x, 4.0)) < 1e-13);
  }
  // x = 0 is the prefactor
  const double alpha = 1.3, s = 4.0, a = 1.5;
  const double pref = std::pow(2.0, alpha) * sf::gamma(0.5 * (alpha + 1.0)) *
                      sf::gamma(s + 1.0) * std::pow(a, 2.0 * s - alpha) /
                      (std::sqrt(kPi) * sf::gamma(s + 1.0 - 0.5 * alpha));
  CHECK(rel(bench::exact_ex2(alpha, s, a, 0.0), pref) < 1e-14);
  CHECK_THROWS_AS(bench::exact_ex2(1.0, 4.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("exact_ex2 at alpha = 2 equals the analytic -u''") {
  const double s = 4.0, a = 1.0;
  for (double x : {0.1, 0.4, 0.8}) {
    const double t = a * a - x * x;
    const double upp = -2.0 * s * std::pow(t, s - 1.0) +
                       4.0 * s * (s - 1.0) * x * x * std::pow(t, s - 2.0);
    CHECK(std::abs(bench::exact_ex2(2.0, s, a, x) - -upp) < 1e-9);
  }
}

TEST_CASE("exact_ex2 against a fine-grid operator application") {
  // alpha = 1, s = 4, a = 1 at x = 0.25 (spec example tolerance 1e-6)
  const double h = 1.0 / 1024;
  const GridSpec spec = GridSpec::open_box(-1.0, 1.0, h, 1);
  const auto u = sample(
      [](const Eigen::Vector3d& x) {
        const double t = 1.0 - x[0] * x[0];
        return t > 0.0 ? std::pow(t, 4.0) : 0.0;
      },
      spec);
  const auto op = build_operator(1.0, spec);
  const auto v = apply_fft(op, u);
  for (std::int64_t j = 0; j < spec.total(); ++j) {
    if (std::abs(spec.point(j)[0] - 0.25) < 1e-12) {
      CHECK(std::abs(v.data[j] - bench::exact_ex2(1.0, 4.0, 1.0, 0.25)) <
            1e-6);
    }
  }
}

TEST_CASE("exact_poisson_pair oddness, support, and benchmark reduction") {
  auto [u0, f0] = bench::exact_poisson_pair(1.3, 2.0, 0.0);
  CHECK(u0 == 0.0);
  CHECK(f0 == 0.0);
  CHECK(bench::exact_poisson_pair(1.3, 2.0, 1.0).first == 0.0);
  CHECK(bench::exact_poisson_pair(1.3, 2.0, -1.0).first == 0.0);
  // s = alpha/2 collapses the hypergeometric factor: f(x) = x
  for (double x : {0.2, 0.7, 0.999}) {
    CHECK(bench::exact_poisson_pair(1.0, 0.5, x).second ==
          doctest::Approx(x).epsilon(1e-15));
  }
  CHECK_THROWS_AS(bench::exact_poisson_pair(1.0, 2.0, 1.5), std::domain_error);
}

TEST_CASE("exact_ex522_pair center value and classical limit") {
  const double a = 6.0;
  auto [u0, f0] = bench::exact_ex522_pair(1.7, a, {0, 0, 0});
  CHECK(u0 == 1.0);
  CHECK(rel(f0, std::pow(2.0 * a, 1.7) * sf::gamma(1.85) + 1.0) < 1e-13);
  for (double r2 : {0.05, 0.5, 2.0}) {
    const Eigen::Vector3d x(std::sqrt(r2), 0.0, 0.0);
    auto [u, f] = bench::exact_ex522_pair(2.0, a, x);
    const double classical =
        (4.0 * a * a - 4.0 * std::pow(a, 4) * r2) * std::exp(-a * a * r2) +
        std::exp(-a * a * r2);
    CHECK(rel(f, classical) < 1e-11);
    // radial symmetry
    const Eigen::Vector3d y(std::sqrt(r2 / 2), std::sqrt(r2 / 2), 0.0);
    CHECK(rel(f, bench::exact_ex522_pair(2.0, a, y).second) < 1e-12);
  }
}

TEST_CASE("coexistence right-hand side") {
  CHECK(bench::coexistence_rhs({0, 0, 0}) == 1.0);
  CHECK(std::abs(bench::coexistence_rhs({1.0 / 3, 0, 0})) < 1e-30);
  CHECK(bench::coexistence_rhs({1.0, 0, 0}) == 0.0);
  CHECK(bench::coexistence_rhs({0.9, 0.9, 0}) == 0.0);
  const double v = bench::coexistence_rhs({0.5, 0.0, 0});
  const double c = std::cos(0.75 * kPi);
  CHECK(rel(v, std::exp(-0.25) * c * c * c * c) < 1e-14);
}

TEST_CASE("rates") {
  const double errs[2] = {4.0, 1.0};
  const double hs[2] = {0.5, 0.25};
  CHECK(bench::rates(errs, hs)[0] == doctest::Approx(2.0));
  const double flat[3] = {1.0, 1.0, 1.0};
  const double hs3[3] = {0.5, 0.25, 0.125};
  for (double r : bench::rates(flat, hs3)) CHECK(r == 0.0);
  const double bad_hs[2] = {0.5, 0.3};
  CHECK_THROWS_AS(bench::rates(errs, bad_hs), std::invalid_argument);
}

TEST_CASE("operator bench reproduces a frozen table cell") {
  bench::OperatorBenchConfig cfg;
  cfg.example = "ex1";
  cfg.alphas = {0.5};
  cfg.hs = {0.5, 0.25};
  const auto reps = bench::run_operator_bench(cfg);
  REQUIRE(reps.size() == 2);
  const auto& linf = reps[0];
  CHECK(linf.norm == "linf");
  CHECK(linf.rows[1].error == doctest::Approx(9.0065e-4).epsilon(5e-3));
}

TEST_CASE("report writers are deterministic and carry the schema") {
  bench::ConvergenceReport rep;
  rep.example = "ex2";
  rep.alpha = 1.0;
  rep.norm = "linf";
  rep.rows = {{0.5, 0.03125, std::nan("")}, {0.25, 0.0078125, 2.0}};
  rep.meta["s"] = 4.0;
  const auto dir = std::filesystem::temp_directory_path();
  const std::string csv = (dir / "rep_test.csv").string();
  const std::string json = (dir / "rep_test.json").string();
  const std::vector<bench::ConvergenceReport> reps{rep};
  bench::write_report_csv(reps, csv);
  bench::write_report_json(reps, json);

  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "example,alpha,norm,h,error,rate");
  std::getline(in, line);
  CHECK(line == "ex2,1,linf,0.5,0.03125,");
  std::getline(in, line);
  CHECK(line == "ex2,1,linf,0.25,0.0078125,2");

  auto read_all = [](const std::string& p) {
    std::ifstream f(p);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  const std::string first = read_all(csv);
  bench::write_report_csv(reps, csv);
  CHECK(read_all(csv) == first);  // bit-identical rewrite

  const std::string j = read_all(json);
  CHECK(j.find("\"rate\": 2.0") != std::string::npos);
  CHECK(j.find("\"s\": 4.0") != std::string::npos);
  std::filesystem::remove(csv);
  std::filesystem::remove(json);
}

TEST_CASE("ex3 bench validates its reference configuration") {
  bench::OperatorBenchConfig cfg;
  cfg.example = "ex3";
  cfg.alphas = {1.0};
  cfg.hs = {0.25};
  cfg.ref_h = 0.125;  // not finer than min(hs)/4
  CHECK_THROWS_AS(bench::run_operator_bench(cfg), std::invalid_argument);
  cfg.ref_h = 0.0;
  CHECK_THROWS_AS(bench::run_operator_bench(cfg), std::invalid_argument);
}

TEST_CASE("unknown examples and problems are rejected") {
  bench::OperatorBenchConfig cfg;
  cfg.example = "ex9";
  CHECK_THROWS_AS(bench::run_operator_bench(cfg), std::invalid_argument);
  bench::SolverBenchConfig scfg;
  scfg.problem = "heat";
  CHECK_THROWS_AS(bench::run_solver_bench(scfg), std::invalid_argument);
}
