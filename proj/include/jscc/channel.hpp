#pragma once

// MIMO block-fading channel description and the diversity-multiplexing
// tradeoff (DMT) algebra shared by every solver.
//
// The optimal DMT of an m_t x m_r channel with L i.i.d. fading blocks is the
// piecewise-linear curve through (k, L(m_t-k)(m_r-k)), k = 0..m_min. All
// breakpoints are integers, so the curve is held exactly in doubles and every
// query is answered segment-by-segment in closed form.
//
// Segments are numbered from the right: segment i (1..m_min) spans gains
// [m_min-i, m_min-i+1] and has slope magnitude alpha_i = L(|m_t-m_r|+2i-1).

#include <span>
#include <vector>

namespace jscc {

class ChannelSpec {
 public:
  // Throws DomainError unless all counts are >= 1.
  ChannelSpec(int m_t, int m_r, int blocks = 1);

  int m_t() const { return m_t_; }
  int m_r() const { return m_r_; }
  int blocks() const { return blocks_; }
  int m_min() const;
  int m_max() const;
  // L * m_t * m_r, the diversity at zero multiplexing gain.
  double max_diversity() const;

  bool operator==(const ChannelSpec&) const = default;

 private:
  int m_t_;
  int m_r_;
  int blocks_;
};

struct DmtPoint {
  double gain;
  double diversity;
};

class DmtCurve {
 public:
  explicit DmtCurve(const ChannelSpec& spec);

  const ChannelSpec& spec() const { return spec_; }
  int m_min() const { return spec_.m_min(); }
  double max_diversity() const { return points_.front().diversity; }

  // (k, d*(k)) for k = 0..m_min, diversity strictly decreasing.
  std::span<const DmtPoint> breakpoints() const { return points_; }
  // alpha_1..alpha_{m_min}; slopes()[i-1] is segment i.
  std::span<const double> slopes() const { return slopes_; }
  // c_0..c_{m_min}: bandwidth needed by an infinite-layer staircase to climb
  // from d = 0 to the top of segment i. c_0 = 0 and c_{m_min} = +inf.
  std::span<const double> climb_budgets() const { return budgets_; }

  double slope(int segment) const { return slopes_[segment - 1]; }
  // Gain at which segment i's supporting line reaches zero diversity.
  double line_intercept(int segment) const;
  // Gain / diversity at the lower-right end of segment i.
  double segment_low_gain(int segment) const { return m_min() - segment + 1; }
  double segment_low_diversity(int segment) const;
  double segment_high_diversity(int segment) const;

  // Unique r in [0, m_min] with d*(r) = intercept + slope * r, found by
  // scanning the segments from the right end of the curve.
  // Requires slope >= 0 and 0 <= intercept <= max_diversity().
  double intersect_rising_line(double intercept, double slope) const;

 private:
  ChannelSpec spec_;
  std::vector<DmtPoint> points_;
  std::vector<double> slopes_;
  std::vector<double> budgets_;
};

DmtCurve dmt_curve(const ChannelSpec& spec);

// Linear interpolation of the breakpoints. Gains within 1e-12 above m_min
// clamp to zero diversity; anything else outside [0, m_min] throws.
double dmt_eval(const DmtCurve& curve, double r);

// Unique gain with dmt_eval(curve, r) == d, d in [0, L m_t m_r].
double dmt_inverse(const DmtCurve& curve, double d);

// Outage exponent of BS layer k under successive decoding with the
// epsilon -> 0 superposition power allocation:
//   L * [m_max m_min (1 - L * sum(prefix)) - (m_max + m_min - 1) r_k].
// Requires nonnegative gains and sum(prefix) + r_k <= 1/L.
double sd_diversity(const ChannelSpec& spec, std::span<const double> prefix, double r_k);

}  // namespace jscc
