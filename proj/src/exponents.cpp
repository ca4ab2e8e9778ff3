#include "jscc/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "jscc/errors.hpp"
#include "jscc/staircase.hpp"

namespace jscc {

namespace {

void require_positive_b(double b) {
  if (!(b > 0.0)) throw DomainError("bandwidth ratio must be positive (got " + std::to_string(b) + ")");
}

}  // namespace

double exponent_upper_bound(const ChannelSpec& spec, double b) {
  require_positive_b(b);
  const double L = spec.blocks();
  const int gap = std::abs(spec.m_t() - spec.m_r());
  double sum = 0.0;
  for (int i = 1; i <= spec.m_min(); ++i) {
    sum += std::min(b / L, double(2 * i - 1 + gap));
  }
  return L * sum;
}

ExponentResult exponent_single_layer(const ChannelSpec& spec, double b) {
  require_positive_b(b);
  const DmtCurve curve(spec);
  const double r = curve.intersect_rising_line(0.0, b);
  LayerAllocation alloc;
  alloc.scheme = Scheme::SingleLayer;
  alloc.gains = {r};
  alloc.time_shares = {1.0};
  return {Scheme::SingleLayer, LayerCount::finite(1), b, b * r, alloc};
}

double segment_climb(double alpha, double x_hi, double delta_entry, double budget) {
  if (!(alpha > 0.0) || !(x_hi > 0.0)) throw DomainError("segment climb needs alpha, x_hi > 0");
  if (!(budget >= 0.0)) throw DomainError("segment climb needs a nonnegative budget");
  const double ceiling = alpha * x_hi;
  if (delta_entry > ceiling * (1.0 + 1e-12)) {
    throw DomainError("segment climb entry lies above the segment's ceiling");
  }
  return ceiling - (ceiling - delta_entry) * std::exp(-budget / alpha);
}

double climb_dmt(const DmtCurve& curve, double start, double budget) {
  if (!(budget >= 0.0)) throw DomainError("climb budget must be nonnegative");
  if (!(start >= 0.0) || start > curve.max_diversity()) {
    throw DomainError("climb must start on the curve");
  }
  const int top_segment = curve.m_min();
  int seg = 1;
  while (seg < top_segment && start >= curve.segment_high_diversity(seg)) ++seg;

  double level = start;
  for (;; ++seg) {
    const double alpha = curve.slope(seg);
    const double x_hi = curve.line_intercept(seg);
    if (seg == top_segment) return segment_climb(alpha, x_hi, level, budget);
    const double ceiling = alpha * x_hi;
    const double top = curve.segment_high_diversity(seg);
    const double need = alpha * std::log((ceiling - level) / (ceiling - top));
    if (budget < need) return segment_climb(alpha, x_hi, level, budget);
    budget -= need;
    level = top;
  }
}

ExponentResult exponent_ls_infinite(const ChannelSpec& spec, double b) {
  require_positive_b(b);
  const DmtCurve curve(spec);
  const auto c = curve.climb_budgets();
  int p = 1;
  while (!(b < c[p])) ++p;
  const double entry = curve.segment_low_diversity(p);
  const double delta = segment_climb(curve.slope(p), curve.line_intercept(p), entry, b - c[p - 1]);
  return {Scheme::LS, LayerCount::infinite(), b, delta, std::nullopt};
}

ExponentResult exponent_hls_infinite(const ChannelSpec& spec, double b) {
  const double analog_floor = 1.0 / spec.m_min();
  if (!(b >= analog_floor)) {
    throw DomainError("HLS needs b >= 1/m_min = " + std::to_string(analog_floor));
  }
  const DmtCurve curve(spec);
  return {Scheme::HLS, LayerCount::infinite(), b, climb_dmt(curve, 1.0, b - analog_floor),
          std::nullopt};
}

ExponentResult exponent_bs_finite(const ChannelSpec& spec, double b, int n) {
  require_positive_b(b);
  if (n < 1) throw DomainError("BS needs at least one layer");
  LayerAllocation alloc = bs_allocation(spec, b, n);
  const double delta = bs_exponent_of(spec, b, alloc);
  return {Scheme::BS, LayerCount::finite(n), b, delta, std::move(alloc)};
}

ExponentResult exponent_bs_infinite(const ChannelSpec& spec, double b) {
  require_positive_b(b);
  const double L = spec.blocks();
  const double full = double(spec.m_t()) * spec.m_r();
  const double delta = L == 1.0 ? std::min(b, full) : (b < L * L * full ? b / L : L * full);
  return {Scheme::BS, LayerCount::infinite(), b, delta, std::nullopt};
}

ExponentResult distortion_exponent(const ChannelSpec& spec, Scheme scheme, LayerCount layers,
                                   double b) {
  switch (scheme) {
    case Scheme::UpperBound:
      return {Scheme::UpperBound, LayerCount::infinite(), b, exponent_upper_bound(spec, b),
              std::nullopt};
    case Scheme::SingleLayer:
      return exponent_single_layer(spec, b);
    case Scheme::LS: {
      if (layers.is_infinite()) return exponent_ls_infinite(spec, b);
      auto solved = solve_ls_staircase(DmtCurve(spec), b, layers.count());
      return {Scheme::LS, layers, b, solved.exponent, std::move(solved.allocation)};
    }
    case Scheme::HLS: {
      if (layers.is_infinite()) return exponent_hls_infinite(spec, b);
      auto solved = solve_hls_staircase(DmtCurve(spec), b, layers.count());
      return {Scheme::HLS, layers, b, solved.exponent, std::move(solved.allocation)};
    }
    case Scheme::BS:
      if (layers.is_infinite()) return exponent_bs_infinite(spec, b);
      return exponent_bs_finite(spec, b, layers.count());
  }
  throw DomainError("unknown scheme");
}

}  // namespace jscc
