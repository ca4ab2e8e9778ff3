#pragma once

// Closed-form distortion exponents Delta = -lim log ED / log SNR for the
// upper bound, single-layer digital transmission, and the LS / HLS / BS
// layered schemes, as functions of the bandwidth ratio b (channel uses per
// source sample).

#include <optional>

#include "jscc/allocation.hpp"
#include "jscc/channel.hpp"

namespace jscc {

struct ExponentResult {
  Scheme scheme = Scheme::UpperBound;
  LayerCount layers = LayerCount::finite(1);
  double bandwidth_ratio = 0.0;
  double exponent = 0.0;
  std::optional<LayerAllocation> allocation;
};

// L * sum_{i=1}^{m_min} min{b/L, 2i - 1 + |m_t - m_r|}.
double exponent_upper_bound(const ChannelSpec& spec, double b);

// Fixed point b r* = d*(r*); the allocation carries r*.
ExponentResult exponent_single_layer(const ChannelSpec& spec, double b);

// Continuous staircase on one linear piece d = alpha (x_hi - r): starting at
// diversity delta_entry and spending `budget` units of bandwidth,
//   alpha x_hi - (alpha x_hi - delta_entry) exp(-budget / alpha).
double segment_climb(double alpha, double x_hi, double delta_entry, double budget);

// Infinite-layer staircase over the whole DMT, starting at `start` and
// spending `budget`; crosses breakpoints as the budget allows.
double climb_dmt(const DmtCurve& curve, double start, double budget);

// Infinite-layer LS via the climb budgets c_p of the curve.
ExponentResult exponent_ls_infinite(const ChannelSpec& spec, double b);

// Infinite-layer HLS: climb from the analog floor d = 1 with budget
// b - 1/m_min. Requires b >= 1/m_min.
ExponentResult exponent_hls_infinite(const ChannelSpec& spec, double b);

// n-layer BS with the geometric gain allocation of bs_allocation().
ExponentResult exponent_bs_finite(const ChannelSpec& spec, double b, int n);

// L = 1: min{b, m_t m_r}.  L > 1: b/L below L^2 m_t m_r, L m_t m_r above.
ExponentResult exponent_bs_infinite(const ChannelSpec& spec, double b);

// Dispatch on scheme and layer count. Finite LS / HLS use the equal-share
// staircase; HLS with zero layers is pure analog. UpperBound and SingleLayer
// ignore `layers`.
ExponentResult distortion_exponent(const ChannelSpec& spec, Scheme scheme, LayerCount layers,
                                   double b);

}  // namespace jscc
