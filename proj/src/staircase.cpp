#include "jscc/staircase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "jscc/errors.hpp"

namespace jscc {

namespace {

constexpr double kShareSlack = 1e-12;

std::vector<double> resolve_shares(int n, std::span<const double> shares) {
  if (shares.empty()) return std::vector<double>(n, 1.0 / n);
  if (int(shares.size()) != n) {
    throw DomainError("expected " + std::to_string(n) + " time shares, got " +
                      std::to_string(shares.size()));
  }
  double total = 0.0;
  for (double t : shares) {
    if (!(t >= 0.0)) throw DomainError("time shares must be nonnegative");
    total += t;
  }
  if (std::abs(total - 1.0) > kShareSlack) {
    throw DomainError("time shares sum to " + std::to_string(total) + ", not 1");
  }
  return {shares.begin(), shares.end()};
}

// Top-down staircase shared by LS and HLS.
StaircaseResult climb_staircase(const DmtCurve& curve, Scheme scheme, double slope_scale,
                                double top, int n, std::vector<double> shares) {
  StaircaseResult out;
  out.allocation.scheme = scheme;
  out.allocation.gains.assign(n, 0.0);
  double level = top;
  for (int k = n - 1; k >= 0; --k) {
    const double r = curve.intersect_rising_line(level, slope_scale * shares[k]);
    out.allocation.gains[k] = r;
    level = dmt_eval(curve, r);
  }
  out.allocation.time_shares = std::move(shares);
  out.exponent = level;
  return out;
}

void require_ordered(const LayerAllocation& alloc) {
  if (alloc.time_shares.size() != alloc.gains.size()) {
    throw DomainError("allocation needs one time share per layer");
  }
  if (!std::is_sorted(alloc.gains.begin(), alloc.gains.end())) {
    throw DomainError("layered source needs nondecreasing gains");
  }
}

std::vector<double> staircase_residuals(const DmtCurve& curve, double slope_scale, double top,
                                        const LayerAllocation& alloc) {
  require_ordered(alloc);
  const auto& r = alloc.gains;
  const auto& t = alloc.time_shares;
  const int n = alloc.layers();
  std::vector<double> res;
  res.reserve(n);
  double above = top;
  for (int k = n - 1; k >= 0; --k) {
    const double here = dmt_eval(curve, r[k]);
    res.push_back(above + slope_scale * t[k] * r[k] - here);
    above = here;
  }
  return res;
}

double min_decay_term(const DmtCurve& curve, double slope_scale, double top,
                      const LayerAllocation& alloc) {
  require_ordered(alloc);
  const int n = alloc.layers();
  double spent = 0.0;
  double best = n > 0 ? dmt_eval(curve, alloc.gains[0]) : top;
  for (int k = 0; k < n; ++k) {
    spent += slope_scale * alloc.time_shares[k] * alloc.gains[k];
    const double next = k + 1 < n ? dmt_eval(curve, alloc.gains[k + 1]) : top;
    best = std::min(best, next + spent);
  }
  return best;
}

double hls_slope(const DmtCurve& curve, double b) {
  const double floor_b = 1.0 / curve.m_min();
  if (!(b >= floor_b)) {
    throw DomainError("HLS needs b >= 1/m_min = " + std::to_string(floor_b));
  }
  return b - floor_b;
}

}  // namespace

StaircaseResult solve_ls_staircase(const DmtCurve& curve, double b, int n,
                                   std::span<const double> time_shares) {
  if (!(b > 0.0)) throw DomainError("bandwidth ratio must be positive");
  if (n < 1) throw DomainError("LS needs at least one layer");
  return climb_staircase(curve, Scheme::LS, b, 0.0, n, resolve_shares(n, time_shares));
}

StaircaseResult solve_hls_staircase(const DmtCurve& curve, double b, int n,
                                    std::span<const double> time_shares) {
  const double slope_scale = hls_slope(curve, b);
  if (n < 0) throw DomainError("layer count must be nonnegative");
  StaircaseResult out;
  if (n == 0) {
    out.allocation.scheme = Scheme::HLS;
    out.exponent = 1.0;
  } else {
    out = climb_staircase(curve, Scheme::HLS, slope_scale, 1.0, n, resolve_shares(n, time_shares));
  }
  out.allocation.analog_share = 1.0 / (b * curve.m_min());
  return out;
}

std::vector<double> ls_staircase_residuals(const DmtCurve& curve, double b,
                                           const LayerAllocation& alloc) {
  return staircase_residuals(curve, b, 0.0, alloc);
}

std::vector<double> hls_staircase_residuals(const DmtCurve& curve, double b,
                                            const LayerAllocation& alloc) {
  return staircase_residuals(curve, hls_slope(curve, b), 1.0, alloc);
}

double ls_exponent_of(const DmtCurve& curve, double b, const LayerAllocation& alloc) {
  return min_decay_term(curve, b, 0.0, alloc);
}

double hls_exponent_of(const DmtCurve& curve, double b, const LayerAllocation& alloc) {
  return min_decay_term(curve, hls_slope(curve, b), 1.0, alloc);
}

LayerAllocation bs_allocation(const ChannelSpec& spec, double b, int n) {
  if (!(b > 0.0)) throw DomainError("bandwidth ratio must be positive");
  if (n < 1) throw DomainError("BS needs at least one layer");

  const int L = spec.blocks();
  LayerAllocation alloc;
  alloc.scheme = Scheme::BS;

  // Decay terms are A(1 - L R_i) - B r_{i+1} + b R_i on the active channel.
  double A = 0.0;
  double B = 0.0;
  double eta = 0.0;
  if (L == 1) {
    const auto band_size = [&](int k) { return double(spec.m_t() - k) * (spec.m_r() - k); };
    int k = 0;
    while (k + 1 < spec.m_min() && b < band_size(k + 1)) ++k;
    alloc.antenna_reduction = k;
    A = band_size(k);
    B = spec.m_t() + spec.m_r() - 2 * k - 1;
    eta = (b - band_size(k + 1)) / B;
  } else {
    A = L * double(spec.m_t()) * spec.m_r();
    B = L * double(spec.m_t() + spec.m_r() - 1);
    eta = 1.0 + (b - L * A) / B;
  }

  alloc.gains.assign(n, 0.0);
  if (eta < 0.0) {
    alloc.gains[0] = 1.0 / L;
  } else if (eta <= 1.0) {
    double geometric = 0.0;
    double power = 1.0;
    for (int j = 0; j < n; ++j, power *= eta) geometric += power;
    double r = A / (b * geometric + B);
    for (int i = 0; i < n; ++i, r *= eta) alloc.gains[i] = r;
  } else {
    // Build from the last (largest) layer so nothing overflows for large n.
    const double mu = 1.0 / eta;
    double geometric = 0.0;
    double power = 1.0;
    for (int j = 0; j < n; ++j, power *= mu) geometric += power;
    const double mu_top = std::pow(mu, n - 1);
    double r = A / (b * geometric + B * mu_top);
    for (int i = n - 1; i >= 0; --i, r *= mu) alloc.gains[i] = r;
  }

  alloc.power_exponents.reserve(n);
  double used = 0.0;
  for (int i = 0; i < n; ++i) {
    alloc.power_exponents.push_back(1.0 - L * used);
    used += alloc.gains[i];
  }
  if (used > 1.0 / L + 1e-12) {
    throw std::logic_error("BS gains exceed the superposition budget 1/L");
  }
  return alloc;
}

ChannelSpec bs_active_channel(const ChannelSpec& spec, const LayerAllocation& alloc) {
  const int k = alloc.antenna_reduction;
  return ChannelSpec(spec.m_t() - k, spec.m_r() - k, spec.blocks());
}

std::vector<double> bs_decay_terms(const ChannelSpec& spec, double b, const LayerAllocation& alloc) {
  const ChannelSpec active = bs_active_channel(spec, alloc);
  const std::span<const double> gains = alloc.gains;
  const int n = alloc.layers();
  std::vector<double> terms;
  terms.reserve(n + 1);
  double spent = 0.0;
  for (int i = 0; i <= n; ++i) {
    const auto prefix = gains.first(i);
    const double sd = i < n ? sd_diversity(active, prefix, gains[i]) : 0.0;
    terms.push_back(sd + b * spent);
    if (i < n) spent += gains[i];
  }
  return terms;
}

double bs_exponent_of(const ChannelSpec& spec, double b, const LayerAllocation& alloc) {
  const auto terms = bs_decay_terms(spec, b, alloc);
  return *std::min_element(terms.begin(), terms.end());
}

}  // namespace jscc
