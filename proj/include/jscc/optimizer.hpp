#pragma once

// Finite-SNR grid search for the rate / time-share / power split that
// minimizes expected distortion at one SNR.
//
// LS / HLS candidates: nondecreasing rate tuples from the rate grid (a layer
// with a higher rate than its successor only gives up bits) times every
// composition of the shares on the share grid, zeros allowed, so an n-layer
// search contains the (n-1)-layer optima. BS candidates: any rate tuple
// times strictly positive power fractions on the simplex grid; layer k gets
// fraction f_k of the SNR.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jscc/allocation.hpp"
#include "jscc/channel.hpp"
#include "jscc/montecarlo.hpp"

namespace jscc {

struct GridRange {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  // min, min+step, ..., up to max (inclusive within 1e-9 steps).
  // DomainError if step <= 0 or max < min.
  std::vector<double> values() const;
};

enum class Evaluator { Auto, Analytic, MonteCarlo };

struct SearchSpace {
  Scheme scheme = Scheme::LS;
  int layers = 1;
  GridRange rate_grid{0.25, 8.0, 0.25};
  // Step of the time-share (LS/HLS) or power-fraction (BS) simplex grid;
  // 1/step must be an integer.
  double share_step = 0.1;
  double snr_db = 20.0;
  double b = 1.0;
  Evaluator evaluator = Evaluator::Auto;
  // Coordinate pass around the grid optimum with steps halved 4 times.
  bool refine = false;
};

struct Candidate {
  std::vector<double> rates;
  // Time shares (LS/HLS) or power fractions (BS).
  std::vector<double> split;
  double ed = 0.0;
  double ed_stderr = 0.0;
};

struct SearchResult {
  Candidate best;
  Transmission transmission;
  // High-SNR view of the optimum: gains R/log2(snr); BS power exponents
  // log(Sbar_k)/log(snr).
  LayerAllocation allocation;
  std::int64_t candidates = 0;
  std::string evaluator;
  // Every grid candidate in enumeration order, when requested.
  std::vector<Candidate> grid;
};

inline constexpr double kMaxGridPoints = 1e7;

// Number of grid candidates (as a double so oversized grids do not overflow).
double count_candidates(const SearchSpace& space);

// DomainError on invalid spaces or when count_candidates exceeds 1e7;
// InfeasibleError when no candidate can be transmitted.
SearchResult optimize_finite_snr(const ChannelSpec& spec, const SearchSpace& space,
                                 const SimulationConfig& cfg, bool keep_grid = false);

Transmission candidate_transmission(const SearchSpace& space, const Candidate& c);

}  // namespace jscc
