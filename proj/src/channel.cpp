#include "jscc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "jscc/errors.hpp"

namespace jscc {

namespace {
constexpr double kGainSlack = 1e-12;
}

ChannelSpec::ChannelSpec(int m_t, int m_r, int blocks) : m_t_(m_t), m_r_(m_r), blocks_(blocks) {
  if (m_t < 1 || m_r < 1 || blocks < 1) {
    throw DomainError("channel needs m_t, m_r, blocks >= 1 (got " + std::to_string(m_t) + ", " +
                      std::to_string(m_r) + ", " + std::to_string(blocks) + ")");
  }
}

int ChannelSpec::m_min() const { return std::min(m_t_, m_r_); }
int ChannelSpec::m_max() const { return std::max(m_t_, m_r_); }
double ChannelSpec::max_diversity() const { return double(blocks_) * m_t_ * m_r_; }

DmtCurve::DmtCurve(const ChannelSpec& spec) : spec_(spec) {
  const int m_min = spec.m_min();
  const double L = spec.blocks();
  points_.reserve(m_min + 1);
  for (int k = 0; k <= m_min; ++k) {
    points_.push_back({double(k), L * (spec.m_t() - k) * (spec.m_r() - k)});
  }
  const int gap = std::abs(spec.m_t() - spec.m_r());
  slopes_.reserve(m_min);
  for (int i = 1; i <= m_min; ++i) {
    slopes_.push_back(L * (gap + 2 * i - 1));
  }
  budgets_.assign(m_min + 1, 0.0);
  for (int i = 1; i < m_min; ++i) {
    budgets_[i] = budgets_[i - 1] + slope(i) * std::log(double(m_min - i + 1) / double(m_min - i));
  }
  budgets_[m_min] = std::numeric_limits<double>::infinity();
}

double DmtCurve::segment_low_diversity(int segment) const {
  return points_[m_min() - segment + 1].diversity;
}

double DmtCurve::segment_high_diversity(int segment) const {
  return points_[m_min() - segment].diversity;
}

double DmtCurve::line_intercept(int segment) const {
  return segment_low_gain(segment) + segment_low_diversity(segment) / slope(segment);
}

double DmtCurve::intersect_rising_line(double intercept, double slope) const {
  if (!(slope >= 0.0) || !(intercept >= 0.0)) {
    throw DomainError("rising line needs slope >= 0 and intercept >= 0");
  }
  for (int k = m_min() - 1; k >= 0; --k) {
    const DmtPoint& left = points_[k];
    const double gap = left.diversity - intercept - slope * left.gain;
    if (gap < 0.0) continue;
    const double alpha = left.diversity - points_[k + 1].diversity;
    const double r = (left.diversity + alpha * left.gain - intercept) / (alpha + slope);
    return std::clamp(r, left.gain, left.gain + 1.0);
  }
  // intercept above d*(0) by rounding only
  return 0.0;
}

DmtCurve dmt_curve(const ChannelSpec& spec) { return DmtCurve(spec); }

double dmt_eval(const DmtCurve& curve, double r) {
  const int m_min = curve.m_min();
  if (!(r >= 0.0) || r > m_min + kGainSlack) {
    throw DomainError("multiplexing gain " + std::to_string(r) + " outside [0, " +
                      std::to_string(m_min) + "]");
  }
  if (r >= m_min) return 0.0;
  const auto pts = curve.breakpoints();
  const int k = std::min(int(r), m_min - 1);
  const double w = r - pts[k].gain;
  return pts[k].diversity + w * (pts[k + 1].diversity - pts[k].diversity);
}

double dmt_inverse(const DmtCurve& curve, double d) {
  if (!(d >= 0.0) || d > curve.max_diversity()) {
    throw DomainError("diversity " + std::to_string(d) + " outside [0, " +
                      std::to_string(curve.max_diversity()) + "]");
  }
  return curve.intersect_rising_line(d, 0.0);
}

double sd_diversity(const ChannelSpec& spec, std::span<const double> prefix, double r_k) {
  const double L = spec.blocks();
  if (!(r_k >= 0.0) || std::any_of(prefix.begin(), prefix.end(), [](double r) { return !(r >= 0.0); })) {
    throw DomainError("successive-decoding gains must be nonnegative");
  }
  const double before = std::accumulate(prefix.begin(), prefix.end(), 0.0);
  if (before + r_k > 1.0 / L + kGainSlack) {
    throw DomainError("superposed gains sum to " + std::to_string(before + r_k) + " > 1/L");
  }
  const double outer = double(spec.m_max()) * spec.m_min();
  const double inner = spec.m_max() + spec.m_min() - 1;
  return L * (outer * (1.0 - L * before) - inner * r_k);
}

}  // namespace jscc
