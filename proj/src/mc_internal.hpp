#pragma once

// Pieces shared by the parallel kernel and the serial reference.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "jscc/montecarlo.hpp"

namespace jscc {

// One m_r x m_t block with i.i.d. CN(0,1) entries, column-major draw order.
Eigen::MatrixXcd draw_block(const ChannelSpec& spec, RngStream& rng);

namespace mc {

// A transmission with all per-trial constants folded in.
struct PreparedPoint {
  const Transmission* tx = nullptr;
  int layers = 0;
  int reduction = 0;
  // Importance-sampling variance s^2 and log weight = log_w0 + log_w1 * |G|^2.
  double s2 = 1.0;
  double log_w0 = 0.0;
  double log_w1 = 0.0;
  // Eigenvalue multipliers: LS/HLS {s^2 snr/m_t}; BS s^2 Sbar_k / m_t'.
  std::vector<double> gain;
  double analog_gain = 0.0;
  // Distortion exponent (base 2) added by each decoded layer.
  std::vector<double> weight;
};

PreparedPoint prepare(const ChannelSpec& spec, double b, const Transmission& tx, double tilt);

// Weighted first and second moments of D and of each layer's outage
// indicator: [sum wD, sum (wD)^2, then per layer sum w 1{out}, sum w^2 1{out}].
struct Accumulator {
  explicit Accumulator(int n) : layers(n), sums(2 + 2 * std::size_t(n), 0.0) {}
  void add(double w, double d, int decoded);
  void merge(const Accumulator& other);
  SnrPoint finish(double snr_db, std::int64_t trials) const;

  int layers;
  std::vector<double> sums;
};

double snr_db_of(const Transmission& tx);

}  // namespace mc
}  // namespace jscc
