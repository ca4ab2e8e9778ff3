#pragma once

// Seeded Monte Carlo estimation of expected distortion and per-layer outage
// on i.i.d. Rayleigh block-fading MIMO channels.
//
// Trials are cut into fixed-size chunks; chunk c draws from its own stream
// seeded by (seed, c), so the sample set depends only on (seed, trials).
// Chunks run on `shards` OpenMP threads in waves and their partial sums are
// folded in chunk order, which keeps every estimate bitwise identical for
// any shard count.
//
// Each trial's channel is reused at every SNR point / transmission of a run
// (common random numbers), so comparisons between points are paired.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "jscc/allocation.hpp"
#include "jscc/channel.hpp"

namespace jscc {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  // Circularly-symmetric complex Gaussian, zero mean, unit variance.
  std::complex<double> complex_gaussian();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

struct ChannelRealization {
  // H_1..H_L, each m_r x m_t with i.i.d. CN(0,1) entries.
  std::vector<Eigen::MatrixXcd> blocks;
  // Per block: eigenvalues of the m_min-dimensional Gram matrix, ascending.
  std::vector<std::vector<double>> eigenvalues;
};

ChannelRealization sample_channel(const ChannelSpec& spec, RngStream& rng);

// Eigenvalues of H H^dag or H^dag H, whichever is min(rows, cols) square;
// ascending. Rounding negatives above -1e-10 are clamped to zero.
std::vector<double> gram_eigenvalues(const Eigen::MatrixXcd& h);

// (1/L) sum_j log2 det(I + (snr/m_t) H_j H_j^dag), from the eigenvalues.
double instantaneous_capacity(const ChannelRealization& real, double snr);

struct SimulationConfig {
  std::vector<double> snr_grid_db;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  // BS power slack: epsilon_k = k * epsilon0.
  double epsilon0 = 0.01;
  int shards = 1;
  // Importance sampling for rare outages: entries are drawn as CN(0, s^2)
  // with s^2 = snr^-tilt and reweighted by the likelihood ratio. 0 is plain
  // Monte Carlo. Only outage estimates benefit; the distortion estimator's
  // weights are heavy-tailed once s^2 < 1/2.
  double tilt = 0.0;
  // Share of the SNR grid (from the top) used for slope fits, at least 3 points.
  double fit_fraction = 0.5;

  // Throws DomainError on an empty / unsorted grid, trials < 1, shards < 1,
  // epsilon0 <= 0, tilt < 0 or fit_fraction outside (0, 1].
  void validate() const;
};

// A fully specified finite-SNR transmission.
struct Transmission {
  Scheme scheme = Scheme::LS;
  double snr = 1.0;  // linear
  // Bits per channel use of each layer.
  std::vector<double> rates;
  // LS / HLS time shares.
  std::vector<double> shares;
  // BS: total power of layers k..n, strictly decreasing, first equals snr.
  std::vector<double> cumulative_power;
  // BS: layers use the (m_t-k) x (m_r-k) subsystem.
  int antenna_reduction = 0;
};

// Rates r_k log2(snr); BS powers snr^(power_exponent_k - epsilon_{k-1}).
// DomainError if the SNR makes rates negative; InfeasibleError if the BS
// power ordering breaks at this SNR.
Transmission transmission_at(const LayerAllocation& alloc, double snr_db, double epsilon0);

struct SnrPoint {
  double snr_db = 0.0;
  double expected_distortion = 0.0;
  double ed_stderr = 0.0;
  // Probability that layer k is not recovered (it or an earlier layer fails).
  std::vector<double> layer_outage;
  std::vector<double> outage_stderr;
};

struct MonteCarloEstimate {
  std::vector<SnrPoint> per_snr;
  // Slope of -log10 ED against log10 SNR over the fitted tail of the grid;
  // NaN when fewer than 3 points are available.
  double fitted_exponent = 0.0;
  double fit_stderr = 0.0;
};

// OpenMP kernel: every transmission is evaluated on the same trials.
// snr_db labels are taken from the transmissions.
std::vector<SnrPoint> evaluate_transmissions(const ChannelSpec& spec, double b,
                                             std::span<const Transmission> plan,
                                             const SimulationConfig& cfg);

// Serial reference: independent per-point loop, capacities from Eigen
// log-determinants and the analog MMSE from a matrix inverse.
std::vector<SnrPoint> evaluate_transmissions_reference(const ChannelSpec& spec, double b,
                                                       std::span<const Transmission> plan,
                                                       const SimulationConfig& cfg);

// Estimate over cfg.snr_grid_db for an LS / HLS / BS / single-layer allocation.
MonteCarloEstimate simulate(const ChannelSpec& spec, const LayerAllocation& alloc, double b,
                            const SimulationConfig& cfg);

// Single-point wrappers.
SnrPoint ls_expected_distortion(const ChannelSpec& spec, const LayerAllocation& alloc, double b,
                                double snr_db, const SimulationConfig& cfg);
SnrPoint hls_expected_distortion(const ChannelSpec& spec, const LayerAllocation& alloc, double b,
                                 double snr_db, const SimulationConfig& cfg);
SnrPoint bs_expected_distortion(const ChannelSpec& spec, const LayerAllocation& alloc, double b,
                                double snr_db, const SimulationConfig& cfg);

// Slope fit of the top `fraction` of a series (at least 3 points).
struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
};
SlopeFit fit_tail(std::span<const double> snr_db, std::span<const double> values, double fraction);

// Ordinary least squares of -log10(value) on log10(snr) for (snr_db, value)
// pairs. Needs >= 3 points with values in (0, 1].
SlopeFit estimate_exponent(std::span<const std::pair<double, double>> points);

}  // namespace jscc
