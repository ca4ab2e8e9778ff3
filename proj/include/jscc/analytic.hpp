#pragma once

// Exact finite-SNR outage and expected distortion when the channel has a
// single nonzero eigenvalue (m_min = 1, one block). Then
// lambda = ||h||^2 ~ Gamma(m_max, 1) and every decoding event is a threshold
// on lambda, so the expectations reduce to regularized incomplete gammas.
// Used by the optimizer and as the statistical oracle for the simulator.

#include <vector>

#include "jscc/allocation.hpp"
#include "jscc/channel.hpp"
#include "jscc/montecarlo.hpp"

namespace jscc {

// LS / single / BS need m_min = 1 and L = 1. HLS additionally needs SISO,
// where the analog and digital eigenvalues coincide.
bool analytic_available(const ChannelSpec& spec, Scheme scheme);

// 1 - exp(-(2^R - 1) / snr).
double siso_outage_probability(double rate_bits, double snr);

// P(layer k not recovered), k = 1..n, for the transmission.
std::vector<double> analytic_layer_outage(const ChannelSpec& spec, const Transmission& tx);

double analytic_expected_distortion(const ChannelSpec& spec, double b, const Transmission& tx);

}  // namespace jscc
