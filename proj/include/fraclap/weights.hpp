#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fraclap::weights {

/// Radius factor making the d-ball share the volume of the frequency box,
/// (2/sqrt(pi)) * Gamma(d/2 + 1)^(1/d); equals 1 in one dimension.
double zeta(int d);

/// Scheme weight omega^(d)_{alpha,h}(n) with n = sqrt(sq_lag).
///
/// Dispatch: alpha = 0 is the identity stencil (Kronecker delta); d = 1 with
/// alpha in {1, 2} uses the elementary closed forms; sq_lag = 0 is the
/// analytic prefactor; otherwise the 1F2 series is attempted and the
/// quadrature route takes over when the series flags cancellation, its error
/// estimate exceeds 1e-10 relative, or the argument magnitude passes the
/// hard switch (n * zeta_d * pi > 60).
double weight(double alpha, double h, int d, std::int64_t sq_lag);

/// Independent evaluation of the same weight by direct quadrature of the
/// spectral integral (Bessel moment route); never touches the large-argument
/// 1F2 series.
double weight_oracle(double alpha, double h, int d, std::int64_t sq_lag);

/// All 1D weights omega(0..max_lag) at spacing h in one pass; the oscillatory
/// integrals for consecutive lags share a cumulative panel sweep, so the cost
/// is O(max_lag) rather than O(max_lag^2).
std::vector<double> weight_row(double alpha, double h, std::int64_t max_lag);

/// Deduplicated weight set for a finite grid, keyed by squared lag.
/// Values are stored at the requested spacing; construction computes at unit
/// spacing (optionally through the on-disk cache, see FRACLAP_CACHE_DIR) and
/// rescales by h^(-alpha), which the scaling law makes exact.
struct WeightTable {
  double alpha = 0.0;
  int dim = 1;
  double h = 1.0;
  std::int64_t max_sq_lag = 0;
  std::unordered_map<std::int64_t, double> values;

  double at(std::int64_t sq_lag) const;
};

/// Builds the table for every squared lag realizable by the per-axis interior
/// counts in `extents`.
WeightTable build_table(double alpha, double h, int d,
                        std::span<const int> extents);

/// Weight-cache CSV rows: `alpha,d,sq_lag,omega_at_h1` with 17 significant
/// digits. Used both by the FRACLAP_CACHE_DIR persistence and the CLI dump.
void write_weight_csv(const WeightTable& table, const std::string& path);

}  // namespace fraclap::weights
