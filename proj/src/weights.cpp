#include "fraclap/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fraclap/gauss_legendre.hpp"
#include "fraclap/specfun.hpp"
#include "two_double.hpp"

namespace fraclap::weights {

namespace {

constexpr double kPi = std::numbers::pi;

// Hard switch on r = n * zeta_d * pi: above this the 1F2 argument magnitude
// exceeds 900 and the series is never attempted.
constexpr double kSeriesRadiusSwitch = 60.0;

// Series results are accepted only below this relative error estimate.
// Operator applications amplify unit-spacing weight noise by h^(-alpha), so
// the spectral-floor reproductions need the weights close to machine exact.
constexpr double kSeriesRelTol = 1e-13;

// The quadrature route sums exact small-argument moments on [0, 4] and
// Gauss-Legendre panels beyond; at 4 the closed form costs no cancellation,
// unlike the r = 12 switch point of the public bessel_moment.
constexpr double kQuadBase = 4.0;

void validate(double alpha, double h, int d, std::int64_t sq_lag) {
  if (!(d >= 1 && d <= 3))
    throw std::domain_error("weights: dimension must be 1, 2, or 3");
  if (!(alpha >= 0.0)) throw std::domain_error("weights: requires alpha >= 0");
  if (!(h > 0.0)) throw std::domain_error("weights: requires h > 0");
  if (sq_lag < 0) throw std::domain_error("weights: requires sq_lag >= 0");
}

// omega(0) = 2^(1-d) zeta_d^(alpha+d) pi^(alpha+d/2) / ((alpha+d) Gamma(d/2) h^alpha);
// for d = 1 this is the monomial integral (pi/h)^alpha / (alpha+1).
double prefactor(double alpha, int d, double h) {
  if (d == 1) return std::pow(kPi / h, alpha) / (alpha + 1.0);
  return std::pow(2.0, 1 - d) * std::pow(zeta(d), alpha + d) *
         std::pow(kPi, alpha + 0.5 * d) /
         ((alpha + d) * specfun::gamma(0.5 * d) * std::pow(h, alpha));
}

// d = 1, alpha in {1, 2}, sq_lag = n^2 > 0.
double closed_form_1d(double alpha, double h, std::int64_t sq_lag) {
  const auto n = static_cast<std::int64_t>(std::llround(std::sqrt(
      static_cast<double>(sq_lag))));
  const bool odd = (n % 2) != 0;
  const auto m = static_cast<double>(sq_lag);
  if (alpha == 1.0) return odd ? -2.0 / (kPi * h * m) : 0.0;
  return (odd ? -2.0 : 2.0) / (h * h * m);
}

bool is_perfect_square(std::int64_t m) {
  const auto n = static_cast<std::int64_t>(
      std::llround(std::sqrt(static_cast<double>(m))));
  return n * n == m;
}

// Attempts the 1F2 series for sq_lag > 0; returns false when the quadrature
// route must be used instead.
bool try_series(double alpha, int d, double r, double* out) {
  if (r > kSeriesRadiusSwitch) return false;
  const double a[1] = {0.5 * (alpha + d)};
  const double b[2] = {0.5 * (alpha + d + 2), 0.5 * d};
  const specfun::SeriesResult s = specfun::pfq(a, b, -0.25 * r * r, 1e-16);
  if (s.cancellation_flag || s.est_abs_error > kSeriesRelTol * std::abs(s.value))
    return false;
  *out = s.value;
  return true;
}

// Closed hypergeometric form of int_0^r t^lambda J_nu(t) dt; exact at the
// small radii the quadrature route uses it for.
double moment_closed(double lambda, double nu, double r) {
  if (r == 0.0) return 0.0;
  const double p = lambda + nu + 1.0;
  const double a[1] = {0.5 * p};
  const double b[2] = {nu + 1.0, 0.5 * p + 1.0};
  const specfun::SeriesResult s = specfun::pfq(a, b, -0.25 * r * r, 1e-16);
  return std::pow(r, p) / (std::pow(2.0, nu) * p * specfun::gamma(nu + 1.0)) *
         s.value;
}

// Cumulative moment sweep over strictly ascending radii; shares the panel
// prefix so a full table costs O(r_max) panels instead of O(sum r_i).
// Panels never cross the half-period breakpoints k*pi, and the march is kept
// in period-local phase coordinates: a direct cos/sin at theta ~ 10^3 loses
// ~ulp(theta) of phase per node, which shows up as an alternating absolute
// error across the whole weight table.
std::vector<double> moment_sweep(double lambda, double nu,
                                 std::span<const double> radii) {
  std::vector<double> out(radii.size());
  const auto& rule = quad::gauss_legendre(20);

  const auto panel = [&](std::int64_t k, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    detail::TwoDouble s;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
      const double phi = mid + half * rule.nodes[i];
      s = detail::td_add(
          s, detail::two_prod(
                 rule.weights[i] *
                     std::pow(static_cast<double>(k) * kPi + phi, lambda),
                 specfun::bessel_j_phase(nu, k, phi)));
    }
    return half * (s.hi + s.lo);
  };

  detail::TwoDouble acc;
  bool started = false;
  std::int64_t period = 1;  // the base point 4 lies in (pi, 2 pi)
  double phi_cur = kQuadBase - kPi;

  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (r <= kQuadBase) {
      out[i] = moment_closed(lambda, nu, r);
      continue;
    }
    if (!started) {
      acc = detail::td_add_d(acc, moment_closed(lambda, nu, kQuadBase));
      started = true;
    }
    auto kt = static_cast<std::int64_t>(std::floor(r / kPi));
    double phit = r - static_cast<double>(kt) * kPi;
    while (phit >= kPi) phit = r - static_cast<double>(++kt) * kPi;
    while (phit < 0.0) phit = r - static_cast<double>(--kt) * kPi;
    while (period < kt) {
      if (phi_cur < kPi)
        acc = detail::td_add_d(acc, panel(period, phi_cur, kPi));
      ++period;
      phi_cur = 0.0;
    }
    if (phit > phi_cur) {
      acc = detail::td_add_d(acc, panel(period, phi_cur, phit));
      phi_cur = phit;
    }
    out[i] = acc.hi + acc.lo;
  }
  return out;
}

// Quadrature value at unit spacing: the Bessel-moment form of the ball
// integral divided by the cell volume factor.
double quadrature_unit(double alpha, int d, std::int64_t m) {
  const double r = zeta(d) * kPi * std::sqrt(static_cast<double>(m));
  const double radii[1] = {r};
  const double moment =
      moment_sweep(alpha + 0.5 * d, 0.5 * d - 1.0, radii)[0];
  return std::pow(2.0 * kPi, -0.5 * d) *
         std::pow(static_cast<double>(m), -0.5 * (alpha + d)) * moment;
}

// Batch weights at unit spacing for sorted unique squared lags.
std::vector<double> compute_unit_weights(double alpha, int d,
                                         std::span<const std::int64_t> ms) {
  std::vector<double> out(ms.size());
  if (alpha == 0.0) {
    for (std::size_t i = 0; i < ms.size(); ++i) out[i] = ms[i] == 0 ? 1.0 : 0.0;
    return out;
  }
  if (d == 1 && (alpha == 1.0 || alpha == 2.0)) {
    for (std::size_t i = 0; i < ms.size(); ++i)
      out[i] = ms[i] == 0 ? prefactor(alpha, 1, 1.0)
                          : closed_form_1d(alpha, 1.0, ms[i]);
    return out;
  }

  const double zd = zeta(d);
  const double pref = prefactor(alpha, d, 1.0);
  std::vector<std::size_t> pending;
  std::vector<double> pending_r;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i] == 0) {
      out[i] = pref;
      continue;
    }
    const double r = zd * kPi * std::sqrt(static_cast<double>(ms[i]));
    double f12;
    if (try_series(alpha, d, r, &f12)) {
      out[i] = pref * f12;
    } else {
      pending.push_back(i);
      pending_r.push_back(r);
    }
  }
  if (!pending.empty()) {
    const std::vector<double> moments =
        moment_sweep(alpha + 0.5 * d, 0.5 * d - 1.0, pending_r);
    const double scale = std::pow(2.0 * kPi, -0.5 * d);
    for (std::size_t j = 0; j < pending.size(); ++j) {
      const auto m = static_cast<double>(ms[pending[j]]);
      out[pending[j]] = scale * std::pow(m, -0.5 * (alpha + d)) * moments[j];
    }
  }
  return out;
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// In-process store of unit-spacing weights keyed by (alpha, d), with optional
// CSV persistence under FRACLAP_CACHE_DIR.
class TableCache {
 public:
  static TableCache& instance() {
    static TableCache cache;
    return cache;
  }

  // Fills `out` with unit-spacing weights for every m in sorted_ms.
  void fetch(double alpha, int d, const std::vector<std::int64_t>& sorted_ms,
             std::unordered_map<std::int64_t, double>& out) {
    std::lock_guard lock(mutex_);
    auto& entry = store_[{alpha, d}];
    if (!entry.loaded) {
      load_disk(alpha, d, entry);
      entry.loaded = true;
    }
    std::vector<std::int64_t> missing;
    for (std::int64_t m : sorted_ms)
      if (!entry.values.count(m)) missing.push_back(m);
    if (!missing.empty()) {
      const std::vector<double> vals = compute_unit_weights(alpha, d, missing);
      for (std::size_t i = 0; i < missing.size(); ++i)
        entry.values.emplace(missing[i], vals[i]);
      save_disk(alpha, d, entry);
    }
    for (std::int64_t m : sorted_ms) out.emplace(m, entry.values.at(m));
  }

 private:
  struct Entry {
    bool loaded = false;
    std::unordered_map<std::int64_t, double> values;
  };

  static std::string cache_path(double alpha, int d) {
    const char* dir = std::getenv("FRACLAP_CACHE_DIR");
    if (!dir || !*dir) return {};
    return std::string(dir) + "/omega_d" + std::to_string(d) + "_a" +
           format17(alpha) + ".csv";
  }

  static void load_disk(double alpha, int d, Entry& entry) {
    const std::string path = cache_path(alpha, d);
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) return;
    std::string line;
    std::getline(in, line);  // header
    double a, v;
    int dd;
    long long m;
    while (std::getline(in, line)) {
      if (std::sscanf(line.c_str(), "%lf,%d,%lld,%lf", &a, &dd, &m, &v) == 4 &&
          a == alpha && dd == d)
        entry.values.emplace(m, v);
    }
  }

  static void save_disk(double alpha, int d, const Entry& entry) {
    const std::string path = cache_path(alpha, d);
    if (path.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(
        std::filesystem::path(path).parent_path(), ec);
    const std::string tmp = path + ".tmp";
    {
      std::ofstream outf(tmp);
      if (!outf) return;
      outf << "alpha,d,sq_lag,omega_at_h1\n";
      std::vector<std::int64_t> keys;
      keys.reserve(entry.values.size());
      for (const auto& [m, v] : entry.values) keys.push_back(m);
      std::sort(keys.begin(), keys.end());
      for (std::int64_t m : keys)
        outf << format17(alpha) << ',' << d << ',' << m << ','
             << format17(entry.values.at(m)) << '\n';
    }
    std::filesystem::rename(tmp, path, ec);
  }

  std::mutex mutex_;
  std::map<std::pair<double, int>, Entry> store_;
};

}  // namespace

double zeta(int d) {
  if (d < 1) throw std::domain_error("zeta: requires d >= 1");
  // (2/sqrt(pi)) Gamma(d/2+1)^(1/d); the low dimensions reduce to forms with
  // one rounding each (zeta_1 = 1 exactly), which keeps the quadrature upper
  // limits n*zeta_d*pi on the oscillation grid to the ulp.
  if (d == 1) return 1.0;
  if (d == 2) return 2.0 / std::sqrt(kPi);
  if (d == 3) return 2.0 / std::sqrt(kPi) * std::cbrt(0.75 * std::sqrt(kPi));
  return 2.0 / std::sqrt(kPi) *
         std::pow(specfun::gamma(0.5 * d + 1.0), 1.0 / d);
}

double weight(double alpha, double h, int d, std::int64_t sq_lag) {
  validate(alpha, h, d, sq_lag);
  if (alpha == 0.0) return sq_lag == 0 ? 1.0 : 0.0;
  if (sq_lag == 0) return prefactor(alpha, d, h);
  if (d == 1 && (alpha == 1.0 || alpha == 2.0) && is_perfect_square(sq_lag))
    return closed_form_1d(alpha, h, sq_lag);
  const double r = zeta(d) * kPi * std::sqrt(static_cast<double>(sq_lag));
  double series_value;
  if (try_series(alpha, d, r, &series_value))
    return prefactor(alpha, d, h) * series_value;
  return std::pow(h, -alpha) * quadrature_unit(alpha, d, sq_lag);
}

double weight_oracle(double alpha, double h, int d, std::int64_t sq_lag) {
  validate(alpha, h, d, sq_lag);
  if (alpha == 0.0) return sq_lag == 0 ? 1.0 : 0.0;
  if (sq_lag == 0) return prefactor(alpha, d, h);
  return std::pow(h, -alpha) * quadrature_unit(alpha, d, sq_lag);
}

std::vector<double> weight_row(double alpha, double h, std::int64_t max_lag) {
  validate(alpha, h, 1, 0);
  if (max_lag < 0) throw std::domain_error("weight_row: requires max_lag >= 0");
  std::vector<double> row(static_cast<std::size_t>(max_lag) + 1);
  if (alpha == 0.0) {
    row.assign(row.size(), 0.0);
    row[0] = 1.0;
    return row;
  }
  if (alpha == 1.0 || alpha == 2.0) {
    row[0] = prefactor(alpha, 1, h);
    for (std::int64_t n = 1; n <= max_lag; ++n)
      row[static_cast<std::size_t>(n)] = closed_form_1d(alpha, h, n * n);
    return row;
  }
  std::vector<std::int64_t> ms(row.size());
  for (std::int64_t n = 0; n <= max_lag; ++n)
    ms[static_cast<std::size_t>(n)] = n * n;
  const std::vector<double> unit = compute_unit_weights(alpha, 1, ms);
  const double scale = std::pow(h, -alpha);
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = scale * unit[i];
  return row;
}

double WeightTable::at(std::int64_t sq_lag) const {
  const auto it = values.find(sq_lag);
  if (it == values.end())
    throw std::out_of_range("WeightTable: squared lag " +
                            std::to_string(sq_lag) + " not tabulated");
  return it->second;
}

WeightTable build_table(double alpha, double h, int d,
                        std::span<const int> extents) {
  validate(alpha, h, d, 0);
  if (static_cast<int>(extents.size()) != d)
    throw std::invalid_argument("build_table: extents size must equal d");
  for (int n : extents)
    if (n < 1) throw std::invalid_argument("build_table: extents must be >= 1");

  std::int64_t max_m = 0;
  for (int n : extents) max_m += static_cast<std::int64_t>(n - 1) * (n - 1);

  std::vector<char> seen(static_cast<std::size_t>(max_m) + 1, 0);
  if (d == 1) {
    for (std::int64_t l = 0; l < extents[0]; ++l) seen[l * l] = 1;
  } else if (d == 2) {
    for (std::int64_t l0 = 0; l0 < extents[0]; ++l0)
      for (std::int64_t l1 = 0; l1 < extents[1]; ++l1)
        seen[l0 * l0 + l1 * l1] = 1;
  } else {
    for (std::int64_t l0 = 0; l0 < extents[0]; ++l0)
      for (std::int64_t l1 = 0; l1 < extents[1]; ++l1) {
        const std::int64_t base = l0 * l0 + l1 * l1;
        for (std::int64_t l2 = 0; l2 < extents[2]; ++l2)
          seen[base + l2 * l2] = 1;
      }
  }
  std::vector<std::int64_t> ms;
  for (std::int64_t m = 0; m <= max_m; ++m)
    if (seen[static_cast<std::size_t>(m)]) ms.push_back(m);

  WeightTable table;
  table.alpha = alpha;
  table.dim = d;
  table.h = h;
  table.max_sq_lag = max_m;
  std::unordered_map<std::int64_t, double> unit;
  unit.reserve(ms.size());
  TableCache::instance().fetch(alpha, d, ms, unit);
  const double scale = std::pow(h, -alpha);
  table.values.reserve(ms.size());
  for (const auto& [m, v] : unit) table.values.emplace(m, scale * v);
  return table;
}

void write_weight_csv(const WeightTable& table, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out)
      throw std::runtime_error("write_weight_csv: cannot open " + path);
    out << "alpha,d,sq_lag,omega_at_h1\n";
    std::vector<std::int64_t> keys;
    keys.reserve(table.values.size());
    for (const auto& [m, v] : table.values) keys.push_back(m);
    std::sort(keys.begin(), keys.end());
    const double to_unit = std::pow(table.h, table.alpha);
    for (std::int64_t m : keys)
      out << format17(table.alpha) << ',' << table.dim << ',' << m << ','
          << format17(table.at(m) * to_unit) << '\n';
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("write_weight_csv: rename failed");
}

}  // namespace fraclap::weights
