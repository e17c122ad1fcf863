#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "fraclap/specfun.hpp"
#include "fraclap/weights.hpp"

using namespace fraclap;

namespace {
constexpr double kPi = std::numbers::pi;
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("zeta values and the equal-volume property") {
  CHECK(weights::zeta(1) == 1.0);
  CHECK(rel(weights::zeta(2), 2.0 / std::sqrt(kPi)) < 1e-15);
  // ball of radius zeta_d has the volume 2^d of the unit box [-1,1]^d
  for (int d = 1; d <= 3; ++d) {
    const double ball = std::pow(kPi, 0.5 * d) /
                        specfun::gamma(0.5 * d + 1.0) *
                        std::pow(weights::zeta(d), d);
    CHECK(rel(ball, std::pow(2.0, d)) < 1e-14);
  }
}

TEST_CASE("weight at zero lag is the analytic prefactor") {
  for (double alpha : {0.3, 0.5, 1.0, 1.7, 2.0}) {
    for (double h : {1.0, 0.25, 0.0625}) {
      CHECK(rel(weights::weight(alpha, h, 1, 0),
                std::pow(kPi / h, alpha) / (alpha + 1.0)) < 1e-15);
      CHECK(weights::weight(alpha, h, 2, 0) > 0.0);
      CHECK(weights::weight(alpha, h, 3, 0) > 0.0);
    }
  }
}

TEST_CASE("alpha = 2 closed form") {
  for (double h : {1.0, 0.125}) {
    for (int n = 1; n <= 6; ++n) {
      const double expect = 2.0 * ((n % 2) ? -1.0 : 1.0) / (h * h * n * n);
      CHECK(weights::weight(2.0, h, 1, std::int64_t(n) * n) ==
            doctest::Approx(expect).epsilon(1e-15));
    }
  }
}

TEST_CASE("alpha = 1 closed form vanishes at even lags") {
  for (int n = 1; n <= 8; ++n) {
    const double w = weights::weight(1.0, 0.5, 1, std::int64_t(n) * n);
    if (n % 2 == 0)
      CHECK(w == 0.0);
    else
      CHECK(rel(w, -2.0 / (kPi * 0.5 * n * n)) < 1e-15);
  }
  // the quadrature oracle agrees with the analytic zero
  CHECK(std::abs(weights::weight_oracle(1.0, 1.0, 1, 4)) < 1e-12);
}

TEST_CASE("alpha = 0 is the identity stencil") {
  for (int d = 1; d <= 3; ++d) {
    CHECK(weights::weight(0.0, 0.5, d, 0) == 1.0);
    for (std::int64_t m : {1, 2, 9}) CHECK(weights::weight(0.0, 0.5, d, m) == 0.0);
  }
}

TEST_CASE("spec example: weight(0.5, 1, 1, 9) against the oracle") {
  const double w = weights::weight(0.5, 1.0, 1, 9);
  const double o = weights::weight_oracle(0.5, 1.0, 1, 9);
  CHECK(rel(w, o) < 1e-10);
}

TEST_CASE("dual-path agreement across alpha, d, and lags") {
  const double floor_scale = 1e-12;
  for (double alpha : {0.3, 0.5, 1.0, 1.7, 2.0}) {
    for (int d = 1; d <= 3; ++d) {
      const double w0 = weights::weight(alpha, 1.0, d, 0);
      for (std::int64_t m : {1, 2, 4, 9, 25, 49, 100, 225, 400}) {
        const double w = weights::weight(alpha, 1.0, d, m);
        const double o = weights::weight_oracle(alpha, 1.0, d, m);
        CHECK(std::abs(w - o) <=
              1e-9 * std::max(std::abs(w), std::abs(o)) + floor_scale * w0);
      }
    }
  }
}

TEST_CASE("scaling law in h") {
  for (double alpha : {0.5, 1.0, 1.7}) {
    for (int d = 1; d <= 3; ++d) {
      for (std::int64_t m : {0, 1, 5, 36}) {
        const double w1 = weights::weight(alpha, 1.0, d, m);
        for (double h : {0.5, 0.125, 0.03125}) {
          const double wh = weights::weight(alpha, h, d, m);
          CHECK(std::abs(wh - std::pow(h, -alpha) * w1) <=
                1e-12 * std::abs(wh) + 1e-300);
        }
      }
    }
  }
}

TEST_CASE("cross-module consistency: cosine moment equals the 1D route") {
  // bessel_moment(alpha + 1/2, -1/2, n pi) scaled equals the 1D weight
  const double alpha = 0.7, h = 1.0;
  for (int n : {2, 5, 11}) {
    const double r = n * kPi;
    const double m = specfun::bessel_moment(alpha + 0.5, -0.5, r);
    const double w = std::pow(2.0 * kPi, -0.5) *
                     std::pow(double(n) * n, -0.5 * (alpha + 1.0)) * m;
    CHECK(std::abs(w - weights::weight_oracle(alpha, h, 1, std::int64_t(n) * n)) <
          1e-10 * std::abs(w) + 1e-14);
  }
}

TEST_CASE("build_table enumerates the realizable squared lags") {
  const int e1[1] = {4};
  const auto t1 = weights::build_table(1.0, 0.5, 1, e1);
  CHECK(t1.values.size() == 4);
  for (std::int64_t m : {0, 1, 4, 9}) CHECK(t1.values.count(m) == 1);
  CHECK_THROWS_AS(t1.at(2), std::out_of_range);

  const int e2[2] = {3, 3};
  const auto t2 = weights::build_table(0.5, 0.25, 2, e2);
  std::set<std::int64_t> keys;
  for (const auto& [m, v] : t2.values) keys.insert(m);
  CHECK(keys == std::set<std::int64_t>({0, 1, 2, 4, 5, 8}));
}

TEST_CASE("oracle sweep over a 16x16 table at alpha = 1.7") {
  const int e[2] = {16, 16};
  const auto table = weights::build_table(1.7, 1.0, 2, e);
  const double w0 = table.at(0);
  for (const auto& [m, v] : table.values) {
    const double o = weights::weight_oracle(1.7, 1.0, 2, m);
    CHECK(std::abs(v - o) <=
          1e-9 * std::max(std::abs(v), std::abs(o)) + 1e-12 * w0);
  }
}

TEST_CASE("symbol identity: truncated Fourier sum approaches |xi|^alpha") {
  for (double alpha : {0.5, 1.7}) {
    for (double xi : {0.3 * kPi, 0.7 * kPi}) {
      double prev = 1e300;
      for (std::int64_t big : {100, 1000, 10000}) {
        const auto row = weights::weight_row(alpha, 1.0, big);
        double acc = row[0];
        for (std::int64_t k = 1; k <= big; ++k)
          acc += 2.0 * row[std::size_t(k)] * std::cos(xi * k);
        const double dev = std::abs(acc - std::pow(std::abs(xi), alpha));
        CHECK(dev < prev);
        prev = dev;
      }
      CHECK(prev < 1e-2);
    }
  }
}

TEST_CASE("weight-cache CSV round trip through FRACLAP_CACHE_DIR") {
  const std::string dir = std::filesystem::temp_directory_path() /
                          "fraclap_cache_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  setenv("FRACLAP_CACHE_DIR", dir.c_str(), 1);

  const int e[1] = {6};
  const auto t1 = weights::build_table(0.77, 0.5, 1, e);
  bool found = false;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ifstream in(entry.path());
    std::string header;
    std::getline(in, header);
    CHECK(header == "alpha,d,sq_lag,omega_at_h1");
    found = true;
  }
  CHECK(found);
  // a rebuild at another spacing rescales the cached unit values exactly
  const auto t2 = weights::build_table(0.77, 0.125, 1, e);
  for (const auto& [m, v] : t1.values)
    CHECK(t2.at(m) == doctest::Approx(v * std::pow(4.0, 0.77)).epsilon(1e-14));
  unsetenv("FRACLAP_CACHE_DIR");
  std::filesystem::remove_all(dir);
}

TEST_CASE("write_weight_csv emits 17-digit reproducible rows") {
  const int e[1] = {4};
  const auto table = weights::build_table(2.0, 1.0, 1, e);
  const std::string path =
      (std::filesystem::temp_directory_path() / "w_dump.csv").string();
  weights::write_weight_csv(table, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "alpha,d,sq_lag,omega_at_h1");
  std::getline(in, line);  // m = 0 row: pi^2/3
  const auto pos = line.find_last_of(',');
  CHECK(rel(std::stod(line.substr(pos + 1)), kPi * kPi / 3.0) < 1e-16);
  std::getline(in, line);  // m = 1 row: -2
  CHECK(std::stod(line.substr(line.find_last_of(',') + 1)) == -2.0);
  std::filesystem::remove(path);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(weights::weight(0.5, 1.0, 4, 0), std::domain_error);
  CHECK_THROWS_AS(weights::weight(-0.5, 1.0, 1, 0), std::domain_error);
  CHECK_THROWS_AS(weights::weight(0.5, 0.0, 1, 0), std::domain_error);
  CHECK_THROWS_AS(weights::weight(0.5, 1.0, 1, -1), std::domain_error);
  const int e[1] = {0};
  CHECK_THROWS_AS(weights::build_table(0.5, 1.0, 1, e), std::invalid_argument);
}
