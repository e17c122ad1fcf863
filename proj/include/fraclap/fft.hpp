#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace fraclap::fft {

/// True when n factors entirely into primes <= 7.
bool is_smooth7(std::int64_t n);

/// Smallest 7-smooth integer >= n.
int next_smooth7(int n);

/// Complex mixed-radix FFT for a fixed length whose prime factors are all
/// <= 7 (radix-4/2 fast paths, generic small-prime butterflies otherwise).
///
/// forward computes X_k = sum_j x_j e^{-2 pi i jk/n}; inverse includes the
/// 1/n normalization so inverse(forward(v)) == v. Methods are const and use
/// per-call scratch, so one plan may be driven from several threads at once.
class Dft {
 public:
  explicit Dft(int n);
  int size() const { return n_; }

  /// in == out is allowed (an internal copy is made).
  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  void inverse(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  void run(const std::complex<double>* in, std::complex<double>* out,
           bool inv) const;

  int n_ = 1;
  std::vector<int> radices_;
  std::vector<std::complex<double>> tw_fwd_;
  std::vector<std::complex<double>> tw_inv_;
};

/// Shared plan for a given length (plans are immutable once built).
std::shared_ptr<const Dft> plan(int n);

/// In-place transform along every axis of a row-major array with the given
/// per-axis extents.
void dft_nd(std::span<const int> extents, std::complex<double>* data,
            bool inverse);

}  // namespace fraclap::fft
