#include "jscc/analytic.hpp"

#include <algorithm>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "jscc/errors.hpp"

namespace jscc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest lambda at which layer k decodes on its own; +inf if never.
std::vector<double> thresholds(const ChannelSpec& spec, const Transmission& tx) {
  std::vector<double> th;
  const double mt = spec.m_t();
  for (std::size_t k = 0; k < tx.rates.size(); ++k) {
    const double excess = std::exp2(tx.rates[k]) - 1.0;
    if (tx.scheme == Scheme::BS) {
      // (1 + a x) / (1 + c x) >= q  <=>  x (a - q c) >= q - 1
      const double q = excess + 1.0;
      const double a = tx.cumulative_power[k] / mt;
      const double c = k + 1 < tx.rates.size() ? tx.cumulative_power[k + 1] / mt : 0.0;
      const double slope = a - q * c;
      th.push_back(excess <= 0.0 ? 0.0 : (slope > 0.0 ? excess / slope : kInf));
    } else {
      th.push_back(excess * mt / tx.snr);
    }
  }
  // Layers decode in order, so layer k needs every earlier threshold too.
  for (std::size_t k = 1; k < th.size(); ++k) th[k] = std::max(th[k], th[k - 1]);
  return th;
}

double gamma_cdf(double shape, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(shape, x);
}

void require(const ChannelSpec& spec, Scheme scheme) {
  if (!analytic_available(spec, scheme)) {
    throw DomainError("no closed-form evaluator for this channel and scheme");
  }
}

}  // namespace

bool analytic_available(const ChannelSpec& spec, Scheme scheme) {
  if (spec.m_min() != 1 || spec.blocks() != 1) return false;
  if (scheme == Scheme::HLS) return spec.m_t() == 1 && spec.m_r() == 1;
  return scheme != Scheme::UpperBound;
}

double siso_outage_probability(double rate_bits, double snr) {
  if (!(snr > 0.0)) throw DomainError("snr must be positive");
  return -std::expm1(-std::expm1(rate_bits * std::log(2.0)) / snr);
}

std::vector<double> analytic_layer_outage(const ChannelSpec& spec, const Transmission& tx) {
  require(spec, tx.scheme);
  std::vector<double> out;
  for (double t : thresholds(spec, tx)) out.push_back(gamma_cdf(spec.m_max(), t));
  return out;
}

double analytic_expected_distortion(const ChannelSpec& spec, double b, const Transmission& tx) {
  require(spec, tx.scheme);
  const auto th = thresholds(spec, tx);
  const int n = int(th.size());
  const double shape = spec.m_max();
  const bool hls = tx.scheme == Scheme::HLS;
  const double digital = hls ? b - 1.0 : b;
  if (digital < 0.0) throw DomainError("HLS needs b >= 1/m_min");

  // sum_i P(exactly i layers) 2^{-bits_i}
  double ed = 0.0;
  double bits = 0.0;
  double below = 0.0;  // P(lambda < th[i-1]) with th[-1] = 0
  for (int i = 0; i < n; ++i) {
    const double f = gamma_cdf(shape, th[i]);
    ed += (f - below) * std::exp2(-bits);
    bits += tx.scheme == Scheme::BS ? b * tx.rates[i] : digital * tx.shares[i] * tx.rates[i];
    below = f;
  }
  if (!hls) return ed + (1.0 - below) * std::exp2(-bits);

  // E[1{lambda >= theta} / (1 + snr lambda)], lambda ~ Exp(1):
  //   (e^{1/snr} / snr) E1(theta + 1/snr)
  const double theta = n > 0 ? th[n - 1] : 0.0;
  if (std::isinf(theta)) return ed;
  const double u = 1.0 / tx.snr;
  const double x = theta + u;
  // e^x E1(x) ~ 1/x - 1/x^2 + 2/x^3 once E1 itself underflows.
  const double scaled_e1 =
      x < 500.0 ? std::exp(x) * boost::math::expint(1, x) : (1.0 - 1.0 / x + 2.0 / (x * x)) / x;
  const double tail = u * std::exp(-theta) * scaled_e1;
  return ed + std::exp2(-bits) * tail;
}

}  // namespace jscc
