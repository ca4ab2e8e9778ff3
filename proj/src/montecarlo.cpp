#include "jscc/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "jscc/errors.hpp"
#include "mc_internal.hpp"

namespace jscc {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : normal_(0.0, std::sqrt(0.5)) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream),
                    std::uint32_t(stream >> 32), 0x6a73u};
  engine_.seed(seq);
}

std::complex<double> RngStream::complex_gaussian() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {re, im};
}

std::vector<double> gram_eigenvalues(const Eigen::MatrixXcd& h) {
  if (h.rows() == 1 || h.cols() == 1) return {h.squaredNorm()};
  const Eigen::MatrixXcd gram =
      h.rows() <= h.cols() ? Eigen::MatrixXcd(h * h.adjoint()) : Eigen::MatrixXcd(h.adjoint() * h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + gram.rows());
  for (double& v : out) {
    if (v < 0.0) {
      if (v < -1e-10) throw std::logic_error("Gram matrix has a negative eigenvalue");
      v = 0.0;
    }
  }
  return out;
}

Eigen::MatrixXcd draw_block(const ChannelSpec& spec, RngStream& rng) {
  Eigen::MatrixXcd h(spec.m_r(), spec.m_t());
  for (Eigen::Index c = 0; c < h.cols(); ++c) {
    for (Eigen::Index r = 0; r < h.rows(); ++r) h(r, c) = rng.complex_gaussian();
  }
  return h;
}

ChannelRealization sample_channel(const ChannelSpec& spec, RngStream& rng) {
  ChannelRealization real;
  real.blocks.reserve(spec.blocks());
  real.eigenvalues.reserve(spec.blocks());
  for (int j = 0; j < spec.blocks(); ++j) {
    real.blocks.push_back(draw_block(spec, rng));
    real.eigenvalues.push_back(gram_eigenvalues(real.blocks.back()));
  }
  return real;
}

double instantaneous_capacity(const ChannelRealization& real, double snr) {
  if (real.blocks.empty()) throw DomainError("empty channel realization");
  const double a = snr / double(real.blocks.front().cols());
  double sum = 0.0;
  for (const auto& eig : real.eigenvalues) {
    for (double v : eig) sum += std::log2(1.0 + a * v);
  }
  return sum / double(real.eigenvalues.size());
}

void SimulationConfig::validate() const {
  if (snr_grid_db.empty()) throw DomainError("SNR grid is empty");
  for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
    if (!std::isfinite(snr_grid_db[i])) throw DomainError("SNR grid has a non-finite value");
    if (i > 0 && !(snr_grid_db[i] > snr_grid_db[i - 1])) {
      throw DomainError("SNR grid must be strictly increasing");
    }
  }
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (shards < 1) throw DomainError("shards must be >= 1");
  if (!(epsilon0 > 0.0)) throw DomainError("epsilon0 must be positive");
  if (!(tilt >= 0.0)) throw DomainError("tilt must be nonnegative");
  if (!(fit_fraction > 0.0 && fit_fraction <= 1.0)) throw DomainError("fit_fraction must lie in (0, 1]");
}

Transmission transmission_at(const LayerAllocation& alloc, double snr_db, double epsilon0) {
  Transmission tx;
  tx.scheme = alloc.scheme;
  tx.snr = std::pow(10.0, snr_db / 10.0);
  const double lg = std::log2(tx.snr);
  for (double r : alloc.gains) {
    const double rate = r * lg;
    if (rate < 0.0) {
      throw DomainError("SNR " + std::to_string(snr_db) + " dB gives negative layer rates");
    }
    tx.rates.push_back(rate);
  }
  switch (alloc.scheme) {
    case Scheme::LS:
    case Scheme::HLS:
    case Scheme::SingleLayer:
      tx.shares = alloc.time_shares;
      if (tx.shares.empty() && !tx.rates.empty()) {
        tx.shares.assign(tx.rates.size(), 1.0 / double(tx.rates.size()));
      }
      if (tx.shares.size() != tx.rates.size()) throw DomainError("time shares do not match layers");
      break;
    case Scheme::BS: {
      if (alloc.power_exponents.size() != alloc.gains.size()) {
        throw DomainError("BS allocation needs one power exponent per layer");
      }
      tx.antenna_reduction = alloc.antenna_reduction;
      for (std::size_t k = 0; k < alloc.power_exponents.size(); ++k) {
        tx.cumulative_power.push_back(
            std::pow(tx.snr, alloc.power_exponents[k] - double(k) * epsilon0));
      }
      for (std::size_t k = 1; k < tx.cumulative_power.size(); ++k) {
        if (!(tx.cumulative_power[k] < tx.cumulative_power[k - 1])) {
          throw InfeasibleError("BS power ordering fails at " + std::to_string(snr_db) + " dB");
        }
      }
      break;
    }
    case Scheme::UpperBound:
      throw DomainError("the upper bound has no transmission to simulate");
  }
  return tx;
}

namespace mc {

PreparedPoint prepare(const ChannelSpec& spec, double b, const Transmission& tx, double tilt) {
  PreparedPoint p;
  p.tx = &tx;
  p.layers = int(tx.rates.size());
  const int mt_active = spec.m_t() - tx.antenna_reduction;
  if (tx.antenna_reduction < 0 || tx.antenna_reduction >= spec.m_min()) {
    throw DomainError("antenna reduction out of range");
  }
  p.s2 = tilt > 0.0 ? std::pow(tx.snr, -tilt) : 1.0;
  const double entries = double(spec.blocks()) * spec.m_t() * spec.m_r();
  p.log_w0 = tilt > 0.0 ? entries * std::log(p.s2) : 0.0;
  p.log_w1 = tilt > 0.0 ? 1.0 - p.s2 : 0.0;

  switch (tx.scheme) {
    case Scheme::LS:
    case Scheme::SingleLayer:
    case Scheme::HLS: {
      if (tx.shares.size() != tx.rates.size()) throw DomainError("time shares do not match layers");
      p.gain.push_back(p.s2 * tx.snr / spec.m_t());
      double digital = b;
      if (tx.scheme == Scheme::HLS) {
        digital = b - 1.0 / spec.m_min();
        if (digital < 0.0) throw DomainError("HLS needs b >= 1/m_min");
        p.analog_gain = p.s2 * tx.snr / spec.m_min();
      }
      for (int k = 0; k < p.layers; ++k) p.weight.push_back(digital * tx.shares[k] * tx.rates[k]);
      break;
    }
    case Scheme::BS: {
      if (tx.cumulative_power.size() != tx.rates.size()) {
        throw DomainError("BS transmission needs one cumulative power per layer");
      }
      p.reduction = tx.antenna_reduction;
      for (double s : tx.cumulative_power) p.gain.push_back(p.s2 * s / mt_active);
      for (int k = 0; k < p.layers; ++k) p.weight.push_back(b * tx.rates[k]);
      break;
    }
    case Scheme::UpperBound:
      throw DomainError("the upper bound has no transmission to simulate");
  }
  return p;
}

void Accumulator::add(double w, double d, int decoded) {
  const double wd = w * d;
  sums[0] += wd;
  sums[1] += wd * wd;
  for (int k = decoded; k < layers; ++k) {
    sums[2 + 2 * k] += w;
    sums[3 + 2 * k] += w * w;
  }
}

void Accumulator::merge(const Accumulator& other) {
  for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += other.sums[i];
}

SnrPoint Accumulator::finish(double snr_db, std::int64_t trials) const {
  const double n = double(trials);
  auto stats = [n](double s, double s2) {
    const double mean = s / n;
    double var = n > 1.0 ? (s2 - s * mean) / (n - 1.0) : 0.0;
    if (var < 0.0) var = 0.0;
    return std::pair{mean, std::sqrt(var / n)};
  };
  SnrPoint out;
  out.snr_db = snr_db;
  std::tie(out.expected_distortion, out.ed_stderr) = stats(sums[0], sums[1]);
  for (int k = 0; k < layers; ++k) {
    const auto [m, se] = stats(sums[2 + 2 * k], sums[3 + 2 * k]);
    out.layer_outage.push_back(m);
    out.outage_stderr.push_back(se);
  }
  return out;
}

double snr_db_of(const Transmission& tx) { return 10.0 * std::log10(tx.snr); }

}  // namespace mc

namespace {

using mc::Accumulator;
using mc::PreparedPoint;

constexpr std::int64_t kChunkTrials = 1024;
constexpr std::int64_t kWaveChunks = 64;

// Everything one trial needs, derived once from the sampled blocks.
struct TrialView {
  std::vector<std::vector<double>> full;        // per block
  std::vector<std::vector<std::vector<double>>> reduced;  // [reduction][block]
  std::vector<std::vector<double>> analog;      // first m_min columns, per block
  double sumsq = 0.0;
};

double mean_log_capacity(const std::vector<std::vector<double>>& eig, double g) {
  if (g == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& block : eig) {
    for (double v : block) sum += std::log2(1.0 + g * v);
  }
  return sum / double(eig.size());
}

void evaluate(const PreparedPoint& p, const TrialView& view, int m_min, Accumulator& acc) {
  const double w = p.log_w1 != 0.0 ? std::exp(p.log_w0 + p.log_w1 * view.sumsq) : 1.0;
  const Transmission& tx = *p.tx;
  int decoded = 0;
  double exponent = 0.0;
  double d = 1.0;
  if (tx.scheme == Scheme::BS) {
    const auto& eig = p.reduction == 0 ? view.full : view.reduced[p.reduction];
    double upper = mean_log_capacity(eig, p.gain[0]);
    while (decoded < p.layers) {
      const double lower = decoded + 1 < p.layers ? mean_log_capacity(eig, p.gain[decoded + 1]) : 0.0;
      if (upper - lower < tx.rates[decoded]) break;
      exponent += p.weight[decoded];
      upper = lower;
      ++decoded;
    }
    d = std::exp2(-exponent);
  } else {
    const double capacity = mean_log_capacity(view.full, p.gain[0]);
    while (decoded < p.layers && capacity >= tx.rates[decoded]) {
      exponent += p.weight[decoded];
      ++decoded;
    }
    d = std::exp2(-exponent);
    if (tx.scheme == Scheme::HLS && decoded == p.layers) {
      double analog = 0.0;
      for (const auto& block : view.analog) {
        double mmse = 0.0;
        for (double v : block) mmse += 1.0 / (1.0 + p.analog_gain * v);
        analog += mmse / m_min;
      }
      d *= analog / double(view.analog.size());
    }
  }
  acc.add(w, d, decoded);
}

}  // namespace

std::vector<SnrPoint> evaluate_transmissions(const ChannelSpec& spec, double b,
                                             std::span<const Transmission> plan,
                                             const SimulationConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("trials must be >= 1");
  if (cfg.shards < 1) throw DomainError("shards must be >= 1");
  if (!(cfg.tilt >= 0.0)) throw DomainError("tilt must be nonnegative");

  std::vector<PreparedPoint> points;
  points.reserve(plan.size());
  bool need_analog = false;
  int max_reduction = 0;
  for (const auto& tx : plan) {
    points.push_back(mc::prepare(spec, b, tx, cfg.tilt));
    need_analog = need_analog || tx.scheme == Scheme::HLS;
    max_reduction = std::max(max_reduction, points.back().reduction);
  }

  auto fresh = [&] {
    std::vector<Accumulator> v;
    v.reserve(points.size());
    for (const auto& p : points) v.emplace_back(p.layers);
    return v;
  };
  std::vector<Accumulator> total = fresh();

  const std::int64_t chunks = (cfg.trials + kChunkTrials - 1) / kChunkTrials;
  const int m_min = spec.m_min();
  std::vector<std::vector<Accumulator>> wave(kWaveChunks);

  for (std::int64_t first = 0; first < chunks; first += kWaveChunks) {
    const std::int64_t count = std::min(kWaveChunks, chunks - first);
#pragma omp parallel for schedule(dynamic) num_threads(cfg.shards)
    for (std::int64_t slot = 0; slot < count; ++slot) {
      const std::int64_t chunk = first + slot;
      std::vector<Accumulator> local = fresh();
      RngStream rng(cfg.seed, std::uint64_t(chunk));
      const std::int64_t begin = chunk * kChunkTrials;
      const std::int64_t end = std::min(cfg.trials, begin + kChunkTrials);
      TrialView view;
      view.reduced.resize(max_reduction + 1);
      for (std::int64_t t = begin; t < end; ++t) {
        const ChannelRealization real = sample_channel(spec, rng);
        view.full = real.eigenvalues;
        view.sumsq = 0.0;
        if (cfg.tilt > 0.0) {
          for (const auto& h : real.blocks) view.sumsq += h.squaredNorm();
        }
        for (int r = 1; r <= max_reduction; ++r) {
          view.reduced[r].clear();
          for (const auto& h : real.blocks) {
            view.reduced[r].push_back(gram_eigenvalues(h.topLeftCorner(h.rows() - r, h.cols() - r)));
          }
        }
        if (need_analog) {
          view.analog.clear();
          for (const auto& h : real.blocks) view.analog.push_back(gram_eigenvalues(h.leftCols(m_min)));
        }
        for (std::size_t i = 0; i < points.size(); ++i) evaluate(points[i], view, m_min, local[i]);
      }
      wave[slot] = std::move(local);
    }
    for (std::int64_t slot = 0; slot < count; ++slot) {
      for (std::size_t i = 0; i < points.size(); ++i) total[i].merge(wave[slot][i]);
    }
  }

  std::vector<SnrPoint> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.push_back(total[i].finish(mc::snr_db_of(plan[i]), cfg.trials));
  }
  return out;
}

MonteCarloEstimate simulate(const ChannelSpec& spec, const LayerAllocation& alloc, double b,
                            const SimulationConfig& cfg) {
  cfg.validate();
  if (!(b > 0.0)) throw DomainError("bandwidth ratio must be positive");
  std::vector<Transmission> plan;
  for (double db : cfg.snr_grid_db) plan.push_back(transmission_at(alloc, db, cfg.epsilon0));
  MonteCarloEstimate est;
  est.per_snr = evaluate_transmissions(spec, b, plan, cfg);
  for (std::size_t i = 0; i < plan.size(); ++i) est.per_snr[i].snr_db = cfg.snr_grid_db[i];

  std::vector<double> ed;
  for (const auto& p : est.per_snr) ed.push_back(p.expected_distortion);
  const SlopeFit fit = fit_tail(cfg.snr_grid_db, ed, cfg.fit_fraction);
  est.fitted_exponent = fit.slope;
  est.fit_stderr = fit.stderr_;
  return est;
}

namespace {

SnrPoint single_point(const ChannelSpec& spec, const LayerAllocation& alloc, double b,
                      double snr_db, const SimulationConfig& cfg) {
  if (!(b > 0.0)) throw DomainError("bandwidth ratio must be positive");
  const Transmission tx = transmission_at(alloc, snr_db, cfg.epsilon0);
  auto out = evaluate_transmissions(spec, b, std::span(&tx, 1), cfg);
  out.front().snr_db = snr_db;
  return out.front();
}

}  // namespace

SnrPoint ls_expected_distortion(const ChannelSpec& spec, const LayerAllocation& alloc, double b,
                                double snr_db, const SimulationConfig& cfg) {
  if (alloc.scheme != Scheme::LS && alloc.scheme != Scheme::SingleLayer) {
    throw DomainError("expected an LS allocation");
  }
  return single_point(spec, alloc, b, snr_db, cfg);
}

SnrPoint hls_expected_distortion(const ChannelSpec& spec, const LayerAllocation& alloc, double b,
                                 double snr_db, const SimulationConfig& cfg) {
  if (alloc.scheme != Scheme::HLS) throw DomainError("expected an HLS allocation");
  return single_point(spec, alloc, b, snr_db, cfg);
}

SnrPoint bs_expected_distortion(const ChannelSpec& spec, const LayerAllocation& alloc, double b,
                                double snr_db, const SimulationConfig& cfg) {
  if (alloc.scheme != Scheme::BS) throw DomainError("expected a BS allocation");
  return single_point(spec, alloc, b, snr_db, cfg);
}

}  // namespace jscc
