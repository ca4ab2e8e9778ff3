// Straightforward serial estimator kept as a test oracle for the OpenMP
// kernel. It draws the same channels (same chunk streams) but works on the
// matrices directly: capacities are log-determinants and the analog MMSE is
// the trace of an inverse, so no eigenvalue code is shared.

#include <Eigen/Cholesky>
#include <cmath>

#include "jscc/errors.hpp"
#include "jscc/montecarlo.hpp"
#include "mc_internal.hpp"

namespace jscc {

namespace {

constexpr std::int64_t kChunkTrials = 1024;

double log2det_identity_plus(const Eigen::MatrixXcd& h, double c) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) + c * h * h.adjoint();
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) sum += std::log(llt.matrixLLT()(i, i).real());
  return 2.0 * sum / std::log(2.0);
}

double mean_rate(const std::vector<Eigen::MatrixXcd>& blocks, double c) {
  double sum = 0.0;
  for (const auto& h : blocks) sum += log2det_identity_plus(h, c);
  return sum / double(blocks.size());
}

double analog_mse(const std::vector<Eigen::MatrixXcd>& blocks, int m_min, double c) {
  double sum = 0.0;
  for (const auto& h : blocks) {
    const Eigen::MatrixXcd hbar = h.leftCols(m_min);
    const Eigen::MatrixXcd m =
        Eigen::MatrixXcd::Identity(m_min, m_min) + c * hbar.adjoint() * hbar;
    sum += m.inverse().trace().real() / m_min;
  }
  return sum / double(blocks.size());
}

}  // namespace

std::vector<SnrPoint> evaluate_transmissions_reference(const ChannelSpec& spec, double b,
                                                       std::span<const Transmission> plan,
                                                       const SimulationConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("trials must be >= 1");
  if (!(cfg.tilt >= 0.0)) throw DomainError("tilt must be nonnegative");
  const int m_min = spec.m_min();
  const double entries = double(spec.blocks()) * spec.m_t() * spec.m_r();
  const std::int64_t chunks = (cfg.trials + kChunkTrials - 1) / kChunkTrials;

  std::vector<SnrPoint> out;
  for (const Transmission& tx : plan) {
    const int n = int(tx.rates.size());
    const double s2 = cfg.tilt > 0.0 ? std::pow(tx.snr, -cfg.tilt) : 1.0;
    const bool hls = tx.scheme == Scheme::HLS;
    const double digital = hls ? b - 1.0 / m_min : b;
    if (digital < 0.0) throw DomainError("HLS needs b >= 1/m_min");
    const int red = tx.antenna_reduction;
    const double mt_active = spec.m_t() - red;

    mc::Accumulator acc(n);
    for (std::int64_t chunk = 0; chunk < chunks; ++chunk) {
      RngStream rng(cfg.seed, std::uint64_t(chunk));
      const std::int64_t end = std::min(cfg.trials, (chunk + 1) * kChunkTrials);
      for (std::int64_t t = chunk * kChunkTrials; t < end; ++t) {
        std::vector<Eigen::MatrixXcd> blocks;
        double sumsq = 0.0;
        for (int j = 0; j < spec.blocks(); ++j) {
          blocks.push_back(draw_block(spec, rng));
          sumsq += blocks.back().squaredNorm();
        }
        const double w =
            cfg.tilt > 0.0 ? std::exp(entries * std::log(s2) + (1.0 - s2) * sumsq) : 1.0;

        int decoded = 0;
        double bits = 0.0;
        if (tx.scheme == Scheme::BS) {
          std::vector<Eigen::MatrixXcd> active;
          for (const auto& h : blocks) active.push_back(h.topLeftCorner(h.rows() - red, h.cols() - red));
          for (; decoded < n; ++decoded) {
            const double hi = mean_rate(active, s2 * tx.cumulative_power[decoded] / mt_active);
            const double lo = decoded + 1 < n
                                  ? mean_rate(active, s2 * tx.cumulative_power[decoded + 1] / mt_active)
                                  : 0.0;
            if (hi - lo < tx.rates[decoded]) break;
            bits += b * tx.rates[decoded];
          }
        } else {
          const double capacity = mean_rate(blocks, s2 * tx.snr / spec.m_t());
          for (; decoded < n && capacity >= tx.rates[decoded]; ++decoded) {
            bits += digital * tx.shares[decoded] * tx.rates[decoded];
          }
        }
        double d = std::pow(2.0, -bits);
        if (hls && decoded == n) d *= analog_mse(blocks, m_min, s2 * tx.snr / m_min);
        acc.add(w, d, decoded);
      }
    }
    out.push_back(acc.finish(mc::snr_db_of(tx), cfg.trials));
  }
  return out;
}

}  // namespace jscc
