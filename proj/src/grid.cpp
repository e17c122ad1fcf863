#include "fraclap/grid.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace fraclap {

namespace {

std::string sidecar_path(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension(".json");
  return p.string();
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

GridSpec GridSpec::open_box(double lo, double hi, double h, int dim) {
  if (!(h > 0.0)) throw std::invalid_argument("open_box: requires h > 0");
  if (!(lo < hi)) throw std::invalid_argument("open_box: requires lo < hi");
  if (dim < 1 || dim > 3) throw std::invalid_argument("open_box: dim in 1..3");
  // First lattice index j with j*h strictly greater than lo (boundary points
  // excluded, with a relative guard against representation noise).
  const double tol = 1e-9 * h;
  auto first_above = [&](double bound) {
    auto j = static_cast<std::int64_t>(std::floor(bound / h)) + 1;
    while ((j - 1) * h > bound + tol) --j;
    while (j * h <= bound + tol) ++j;
    return j;
  };
  const std::int64_t j_lo = first_above(lo);
  std::int64_t j_hi = first_above(hi);  // first index past the box
  while ((j_hi - 1) * h >= hi - tol) --j_hi;
  if (j_hi <= j_lo) throw std::invalid_argument("open_box: no interior points");

  GridSpec spec;
  spec.h = h;
  spec.dim = dim;
  for (int a = 0; a < dim; ++a) {
    spec.extents[a] = static_cast<int>(j_hi - j_lo);
    spec.origin[a] = static_cast<double>(j_lo) * h;
  }
  return spec;
}

void save_grid_csv(const GridFunction<double>& u, const std::string& path) {
  const GridSpec& s = u.spec;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_grid_csv: cannot open " + path);
  for (int a = 0; a < s.dim; ++a) out << "i" << a << ',';
  for (int a = 0; a < s.dim; ++a) out << 'x' << a << ',';
  out << "value\n";
  for (std::int64_t j = 0; j < s.total(); ++j) {
    const auto idx = s.unflatten(j);
    for (int a = 0; a < s.dim; ++a) out << idx[a] << ',';
    for (int a = 0; a < s.dim; ++a) out << format17(s.coord(a, idx[a])) << ',';
    out << format17(u.data[j]) << '\n';
  }

  nlohmann::json meta;
  meta["h"] = s.h;
  meta["dim"] = s.dim;
  meta["extents"] = std::vector<int>(s.extents.begin(), s.extents.begin() + s.dim);
  meta["origin"] =
      std::vector<double>(s.origin.begin(), s.origin.begin() + s.dim);
  std::ofstream side(sidecar_path(path));
  side << meta.dump(2) << '\n';
}

GridFunction<double> load_grid_csv(const std::string& path) {
  std::ifstream side(sidecar_path(path));
  if (!side)
    throw std::runtime_error("load_grid_csv: missing sidecar for " + path);
  nlohmann::json meta = nlohmann::json::parse(side);
  GridSpec s;
  s.h = meta.at("h").get<double>();
  s.dim = meta.at("dim").get<int>();
  const auto ext = meta.at("extents").get<std::vector<int>>();
  const auto org = meta.at("origin").get<std::vector<double>>();
  for (int a = 0; a < s.dim; ++a) {
    s.extents[a] = ext.at(a);
    s.origin[a] = org.at(a);
  }

  GridFunction<double> u(s);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_grid_csv: cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  std::int64_t row = 0;
  while (std::getline(in, line) && row < s.total()) {
    const auto pos = line.find_last_of(',');
    u.data[row++] = std::stod(line.substr(pos + 1));
  }
  if (row != s.total())
    throw std::runtime_error("load_grid_csv: row count mismatch");
  return u;
}

}  // namespace fraclap
