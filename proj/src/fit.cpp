#include <algorithm>
#include <cmath>
#include <limits>

#include "jscc/errors.hpp"
#include "jscc/montecarlo.hpp"

namespace jscc {

SlopeFit estimate_exponent(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw DomainError("an exponent fit needs at least 3 points");
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [db, v] : points) {
    if (!(v > 0.0 && v <= 1.0)) throw DomainError("fitted values must lie in (0, 1]");
    mx += db / 10.0;
    my += -std::log10(v);
  }
  const double n = double(points.size());
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [db, v] : points) {
    const double dx = db / 10.0 - mx;
    sxx += dx * dx;
    sxy += dx * (-std::log10(v) - my);
  }
  if (!(sxx > 0.0)) throw DomainError("an exponent fit needs distinct SNR values");
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (const auto& [db, v] : points) {
    const double r = -std::log10(v) - my - slope * (db / 10.0 - mx);
    sse += r * r;
  }
  return {slope, std::sqrt(sse / (n - 2.0) / sxx)};
}

SlopeFit fit_tail(std::span<const double> snr_db, std::span<const double> values, double fraction) {
  if (snr_db.size() != values.size()) throw DomainError("fit series lengths differ");
  const std::size_t total = snr_db.size();
  if (total < 3) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  const auto want = std::size_t(std::ceil(fraction * double(total) - 1e-9));
  const std::size_t used = std::clamp<std::size_t>(want, 3, total);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = total - used; i < total; ++i) pts.emplace_back(snr_db[i], values[i]);
  return estimate_exponent(pts);
}

}  // namespace jscc
