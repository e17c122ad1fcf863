#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "fraclap/fft.hpp"

using namespace fraclap::fft;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_signal(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) z = {dist(rng), dist(rng)};
  return v;
}

std::vector<cplx> naive_dft(const std::vector<cplx>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<cplx> out(n);
  for (int k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j)
      acc += in[j] * std::exp(cplx(0.0, -2.0 * std::numbers::pi * j * k / n));
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("smoothness helpers") {
  CHECK(is_smooth7(1));
  CHECK(is_smooth7(840));
  CHECK(!is_smooth7(11));
  CHECK(!is_smooth7(0));
  CHECK(next_smooth7(7) == 7);
  CHECK(next_smooth7(11) == 12);
  CHECK(next_smooth7(121) == 125);
  CHECK(next_smooth7(2045) == 2048);
  CHECK(next_smooth7(2 * 4 - 1) == 7);
}

TEST_CASE("rejects lengths with prime factors above 7") {
  CHECK_THROWS_AS(Dft(11), std::invalid_argument);
  CHECK_THROWS_AS(Dft(13 * 4), std::invalid_argument);
}

TEST_CASE("forward transform matches the naive DFT on all small sizes") {
  for (int n = 1; n <= 200; ++n) {
    if (!is_smooth7(n)) continue;
    Dft plan(n);
    const auto in = random_signal(n, 100 + n);
    std::vector<cplx> out(n);
    plan.forward(in.data(), out.data());
    const auto ref = naive_dft(in);
    double scale = 0.0, err = 0.0;
    for (int k = 0; k < n; ++k) {
      scale = std::max(scale, std::abs(ref[k]));
      err = std::max(err, std::abs(out[k] - ref[k]));
    }
    CHECK(err < 1e-12 * std::max(scale, 1.0));
  }
}

TEST_CASE("larger mixed-radix sizes against the naive DFT") {
  for (int n : {210, 256, 360, 441, 512, 735, 1024}) {
    Dft plan(n);
    const auto in = random_signal(n, n);
    std::vector<cplx> out(n);
    plan.forward(in.data(), out.data());
    const auto ref = naive_dft(in);
    double scale = 0.0, err = 0.0;
    for (int k = 0; k < n; ++k) {
      scale = std::max(scale, std::abs(ref[k]));
      err = std::max(err, std::abs(out[k] - ref[k]));
    }
    CHECK(err < 1e-11 * std::max(scale, 1.0));
  }
}

TEST_CASE("inverse(forward(v)) recovers v within 1e-13 relative") {
  for (int n : {7, 30, 189, 1024, 1029}) {
    Dft plan(n);
    const auto in = random_signal(n, 31 + n);
    std::vector<cplx> mid(n), back(n);
    plan.forward(in.data(), mid.data());
    plan.inverse(mid.data(), back.data());
    double norm = 0.0, err = 0.0;
    for (int j = 0; j < n; ++j) {
      norm = std::max(norm, std::abs(in[j]));
      err = std::max(err, std::abs(back[j] - in[j]));
    }
    CHECK(err < 1e-13 * norm);
  }
}

TEST_CASE("in-place operation is supported") {
  const int n = 60;
  Dft plan(n);
  auto buf = random_signal(n, 5);
  const auto ref = naive_dft(buf);
  plan.forward(buf.data(), buf.data());
  for (int k = 0; k < n; ++k) CHECK(std::abs(buf[k] - ref[k]) < 1e-12 * 20);
}

TEST_CASE("linearity") {
  const int n = 105;
  Dft plan(n);
  const auto u = random_signal(n, 1), v = random_signal(n, 2);
  std::vector<cplx> fu(n), fv(n), w(n), fw(n);
  plan.forward(u.data(), fu.data());
  plan.forward(v.data(), fv.data());
  for (int j = 0; j < n; ++j) w[j] = cplx(0.3, -1.1) * u[j] + 2.0 * v[j];
  plan.forward(w.data(), fw.data());
  for (int k = 0; k < n; ++k)
    CHECK(std::abs(fw[k] - (cplx(0.3, -1.1) * fu[k] + 2.0 * fv[k])) < 1e-12 * n);
}

TEST_CASE("dft_nd equals axis-by-axis naive transforms on a 6x10 array") {
  const int n0 = 6, n1 = 10;
  auto data = random_signal(n0 * n1, 77);
  auto ref = data;
  // rows
  for (int i = 0; i < n0; ++i) {
    std::vector<cplx> row(ref.begin() + i * n1, ref.begin() + (i + 1) * n1);
    const auto fr = naive_dft(row);
    std::copy(fr.begin(), fr.end(), ref.begin() + i * n1);
  }
  // columns
  for (int j = 0; j < n1; ++j) {
    std::vector<cplx> col(n0);
    for (int i = 0; i < n0; ++i) col[i] = ref[i * n1 + j];
    const auto fc = naive_dft(col);
    for (int i = 0; i < n0; ++i) ref[i * n1 + j] = fc[i];
  }
  const int extents[2] = {n0, n1};
  dft_nd(extents, data.data(), false);
  for (int i = 0; i < n0 * n1; ++i) CHECK(std::abs(data[i] - ref[i]) < 1e-11);

  // and the inverse brings it back
  dft_nd(extents, data.data(), true);
  auto orig = random_signal(n0 * n1, 77);
  for (int i = 0; i < n0 * n1; ++i) CHECK(std::abs(data[i] - orig[i]) < 1e-12);
}
