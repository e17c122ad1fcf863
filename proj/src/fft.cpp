#include "fraclap/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fraclap::fft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using cplx = std::complex<double>;

// One Stockham autosort stage: x[i + m*(q + r*j)] -> y[i + m*(j + l*k2)],
// twiddles omega_{l r}^{j q}. Reads and writes stay contiguous in i.
void stage(const cplx* x, cplx* y, int n, int l, int r, const cplx* tw,
           bool inv) {
  const int m = n / (l * r);
  const std::int64_t tws = n / (std::int64_t(l) * r);

  if (r == 2) {
    for (int j = 0; j < l; ++j) {
      const cplx w = tw[std::int64_t(j) * tws];
      const cplx* x0 = x + std::int64_t(m) * (2 * j);
      const cplx* x1 = x0 + m;
      cplx* y0 = y + std::int64_t(m) * j;
      cplx* y1 = y0 + std::int64_t(m) * l;
      for (int i = 0; i < m; ++i) {
        const cplx a = x0[i];
        const cplx b = x1[i] * w;
        y0[i] = a + b;
        y1[i] = a - b;
      }
    }
    return;
  }

  if (r == 4) {
    for (int j = 0; j < l; ++j) {
      const cplx w1 = tw[std::int64_t(j) * tws];
      const cplx w2 = tw[std::int64_t(2 * j) * tws];
      const cplx w3 = tw[std::int64_t(3 * j) * tws];
      const cplx* x0 = x + std::int64_t(m) * (4 * j);
      const cplx* x1 = x0 + m;
      const cplx* x2 = x1 + m;
      const cplx* x3 = x2 + m;
      cplx* y0 = y + std::int64_t(m) * j;
      cplx* y1 = y0 + std::int64_t(m) * l;
      cplx* y2 = y1 + std::int64_t(m) * l;
      cplx* y3 = y2 + std::int64_t(m) * l;
      for (int i = 0; i < m; ++i) {
        const cplx v0 = x0[i];
        const cplx v1 = x1[i] * w1;
        const cplx v2 = x2[i] * w2;
        const cplx v3 = x3[i] * w3;
        const cplx s02 = v0 + v2, d02 = v0 - v2;
        const cplx s13 = v1 + v3, d13 = v1 - v3;
        const cplx r13 = inv ? cplx(-d13.imag(), d13.real())
                             : cplx(d13.imag(), -d13.real());
        y0[i] = s02 + s13;
        y1[i] = d02 + r13;
        y2[i] = s02 - s13;
        y3[i] = d02 - r13;
      }
    }
    return;
  }

  // generic small prime (3, 5, 7)
  const std::int64_t rs = n / r;
  cplx v[7];
  for (int j = 0; j < l; ++j) {
    for (int i = 0; i < m; ++i) {
      for (int q = 0; q < r; ++q)
        v[q] = x[i + std::int64_t(m) * (q + std::int64_t(r) * j)] *
               tw[std::int64_t(j) * q * tws];
      for (int k2 = 0; k2 < r; ++k2) {
        cplx acc = v[0];
        for (int q = 1; q < r; ++q)
          acc += v[q] * tw[std::int64_t(q * k2 % r) * rs];
        y[i + std::int64_t(m) * (j + std::int64_t(l) * k2)] = acc;
      }
    }
  }
}

}  // namespace

bool is_smooth7(std::int64_t n) {
  if (n < 1) return false;
  for (int p : {2, 3, 5, 7})
    while (n % p == 0) n /= p;
  return n == 1;
}

int next_smooth7(int n) {
  if (n < 1) return 1;
  int m = n;
  while (!is_smooth7(m)) ++m;
  return m;
}

Dft::Dft(int n) : n_(n) {
  if (!is_smooth7(n))
    throw std::invalid_argument("Dft: length must be 7-smooth, got " +
                                std::to_string(n));
  int rest = n;
  while (rest % 4 == 0) {
    radices_.push_back(4);
    rest /= 4;
  }
  if (rest % 2 == 0) {
    radices_.push_back(2);
    rest /= 2;
  }
  for (int p : {3, 5, 7})
    while (rest % p == 0) {
      radices_.push_back(p);
      rest /= p;
    }

  tw_fwd_.resize(n);
  tw_inv_.resize(n);
  for (int j = 0; j < n; ++j) {
    const double ang = kTwoPi * j / n;
    tw_fwd_[j] = {std::cos(ang), -std::sin(ang)};
    tw_inv_[j] = std::conj(tw_fwd_[j]);
  }
}

void Dft::run(const std::complex<double>* in, std::complex<double>* out,
              bool inv) const {
  const cplx* tw = inv ? tw_inv_.data() : tw_fwd_.data();
  const int k = static_cast<int>(radices_.size());
  if (k == 0) {
    out[0] = in[0];
    return;
  }

  thread_local std::vector<cplx> scratch;
  thread_local std::vector<cplx> incopy;
  if (static_cast<int>(scratch.size()) < n_) scratch.resize(n_);

  const cplx* src = in;
  if (in == out) {
    if (static_cast<int>(incopy.size()) < n_) incopy.resize(n_);
    std::copy(in, in + n_, incopy.begin());
    src = incopy.data();
  }

  // Ping-pong so that the final stage writes into `out`.
  cplx* buf[2] = {out, scratch.data()};
  int l = 1;
  for (int t = 0; t < k; ++t) {
    cplx* dst = buf[(k - 1 - t) % 2];
    stage(src, dst, n_, l, radices_[t], tw, inv);
    l *= radices_[t];
    src = dst;
  }

  if (inv) {
    const double scale = 1.0 / n_;
    for (int j = 0; j < n_; ++j) out[j] *= scale;
  }
}

void Dft::forward(const std::complex<double>* in,
                  std::complex<double>* out) const {
  run(in, out, false);
}

void Dft::inverse(const std::complex<double>* in,
                  std::complex<double>* out) const {
  run(in, out, true);
}

std::shared_ptr<const Dft> plan(int n) {
  static std::map<int, std::shared_ptr<const Dft>> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, std::make_shared<const Dft>(n)).first;
  return it->second;
}

void dft_nd(std::span<const int> extents, std::complex<double>* data,
            bool inverse) {
  const int d = static_cast<int>(extents.size());
  std::int64_t total = 1;
  for (int n : extents) total *= n;

  for (int axis = 0; axis < d; ++axis) {
    const int n = extents[axis];
    if (n == 1) continue;
    const auto dft = plan(n);
    std::int64_t inner = 1;
    for (int a = axis + 1; a < d; ++a) inner *= extents[a];
    const std::int64_t rows = total / n;

#pragma omp parallel
    {
      std::vector<std::complex<double>> gathered(n);
#pragma omp for schedule(static)
      for (std::int64_t r = 0; r < rows; ++r) {
        if (inner == 1) {
          std::complex<double>* row = data + r * n;
          if (inverse)
            dft->inverse(row, row);
          else
            dft->forward(row, row);
        } else {
          const std::int64_t o = r / inner;
          const std::int64_t i = r % inner;
          std::complex<double>* base = data + o * n * inner + i;
          for (int j = 0; j < n; ++j) gathered[j] = base[j * inner];
          if (inverse)
            dft->inverse(gathered.data(), gathered.data());
          else
            dft->forward(gathered.data(), gathered.data());
          for (int j = 0; j < n; ++j) base[j * inner] = gathered[j];
        }
      }
    }
  }
}

}  // namespace fraclap::fft
