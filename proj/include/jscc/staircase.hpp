#pragma once

// Finite-layer allocation solvers.
//
// LS / HLS: for given time shares t the optimal gains satisfy the staircase
//   top + b' t_n r_n         = d*(r_n)
//   d*(r_{k+1}) + b' t_k r_k = d*(r_k),   k = n-1..1
// with (top, b') = (0, b) for LS and (1, b - 1/m_min) for HLS. Each step is
// one rising-line / DMT intersection, solved exactly. The exponent is d*(r_1).
//
// BS: geometric multiplexing gains that equalize all n+1 decay terms
//   d_sd(r_{i+1}) + b (r_1 + ... + r_i),   i = 0..n,
// under the successive-decoding diversity of the superposition power
// allocation.

#include <span>
#include <vector>

#include "jscc/allocation.hpp"
#include "jscc/channel.hpp"

namespace jscc {

struct StaircaseResult {
  LayerAllocation allocation;
  double exponent = 0.0;
};

// Empty time_shares means equal shares 1/n. Shares must be nonnegative and
// sum to one (within 1e-12); otherwise DomainError.
StaircaseResult solve_ls_staircase(const DmtCurve& curve, double b, int n,
                                   std::span<const double> time_shares = {});

// Requires b >= 1/m_min. n = 0 is pure analog transmission (exponent 1).
StaircaseResult solve_hls_staircase(const DmtCurve& curve, double b, int n,
                                    std::span<const double> time_shares = {});

// Residuals of the LS / HLS staircase equations at an allocation, top
// equation first.
std::vector<double> ls_staircase_residuals(const DmtCurve& curve, double b,
                                           const LayerAllocation& alloc);
std::vector<double> hls_staircase_residuals(const DmtCurve& curve, double b,
                                            const LayerAllocation& alloc);

// Exponent attained by an arbitrary ordered LS / HLS allocation:
//   min_k { d*(r_{k+1}) + b' sum_{i<=k} t_i r_i },
// with the HLS top term 1 + b' sum t_i r_i.
double ls_exponent_of(const DmtCurve& curve, double b, const LayerAllocation& alloc);
double hls_exponent_of(const DmtCurve& curve, double b, const LayerAllocation& alloc);

// Multiplexing gains and power exponents for n-layer BS.
//
// Single block: the band k with (m_t-k-1)(m_r-k-1) <= b < (m_t-k)(m_r-k)
// selects the (m_t-k) x (m_r-k) subsystem and the equalizing ratio
//   eta_k = (b - (m_t-k-1)(m_r-k-1)) / (m_t + m_r - 2k - 1),
// r_i = eta_k^{i-1} r_1. For b >= m_t m_r, k = 0 and eta_0 >= 1.
//
// L blocks: the equalizing ratio on the full system is
//   eta = 1 + (b - L^2 m_t m_r) / (L (m_t + m_r - 1)).
// When eta < 0 no equalizing allocation is feasible and all rate goes to the
// first layer (r_1 = 1/L), which attains the ceiling b/L.
LayerAllocation bs_allocation(const ChannelSpec& spec, double b, int n);

// The channel the BS layers actually use (spec reduced by antenna_reduction).
ChannelSpec bs_active_channel(const ChannelSpec& spec, const LayerAllocation& alloc);

// The n+1 terms of the BS decay exponent, i = 0..n, evaluated on the active
// channel. Their minimum is the attained exponent.
std::vector<double> bs_decay_terms(const ChannelSpec& spec, double b, const LayerAllocation& alloc);
double bs_exponent_of(const ChannelSpec& spec, double b, const LayerAllocation& alloc);

}  // namespace jscc
