#include "jscc/optimizer.hpp"

#include <omp.h>

#include <cmath>
#include <functional>
#include <string>

#include "jscc/analytic.hpp"
#include "jscc/errors.hpp"

namespace jscc {

namespace {

constexpr std::size_t kBatch = 4096;

double binomial(double n, double k) {
  if (k < 0.0 || k > n) return 0.0;
  double out = 1.0;
  for (double i = 1.0; i <= k; ++i) out *= (n - k + i) / i;
  return out;
}

bool ordered_rates(Scheme s) { return s != Scheme::BS; }

int share_units(double step) {
  if (!(step > 0.0) || step > 1.0) throw DomainError("share step must lie in (0, 1]");
  const double units = std::round(1.0 / step);
  if (std::abs(units * step - 1.0) > 1e-9) throw DomainError("1/share_step must be an integer");
  return int(units);
}

void validate(const SearchSpace& space) {
  if (space.scheme == Scheme::UpperBound) throw DomainError("the upper bound cannot be optimized");
  if (space.layers < 0 || space.layers > 3) throw DomainError("layers must lie in 0..3");
  if (space.layers == 0 && space.scheme != Scheme::HLS) {
    throw DomainError("zero layers is only meaningful for HLS");
  }
  if (space.scheme == Scheme::SingleLayer && space.layers != 1) {
    throw DomainError("single-layer search has exactly one layer");
  }
  if (!(space.b > 0.0)) throw DomainError("bandwidth ratio must be positive");
  if (!std::isfinite(space.snr_db)) throw DomainError("snr_db must be finite");
  if (space.rate_grid.min < 0.0) throw DomainError("rates must be nonnegative");
  space.rate_grid.values();
  share_units(space.share_step);
}

// Calls visit(rates, split) for every candidate, in lexicographic order.
void enumerate(const SearchSpace& space, const std::function<void(const Candidate&)>& visit) {
  const auto grid = space.rate_grid.values();
  const int n = space.layers;
  const int units = share_units(space.share_step);
  const bool bs = space.scheme == Scheme::BS;

  std::vector<std::vector<double>> splits;
  std::vector<int> parts(std::size_t(n), 0);
  std::function<void(int, int)> compose = [&](int k, int left) {
    if (k == n - 1) {
      if (bs && left < 1) return;
      parts[k] = left;
      std::vector<double> s;
      for (int p : parts) s.push_back(double(p) / units);
      splits.push_back(std::move(s));
      return;
    }
    for (int p = bs ? 1 : 0; p <= left; ++p) {
      parts[k] = p;
      compose(k + 1, left - p);
    }
  };
  if (n == 0) {
    splits.emplace_back();
  } else {
    compose(0, units);
  }

  Candidate c;
  c.rates.assign(std::size_t(n), 0.0);
  std::function<void(int, std::size_t)> pick = [&](int k, std::size_t from) {
    if (k == n) {
      for (const auto& s : splits) {
        c.split = s;
        visit(c);
      }
      return;
    }
    for (std::size_t i = from; i < grid.size(); ++i) {
      c.rates[k] = grid[i];
      pick(k + 1, ordered_rates(space.scheme) ? i : 0);
    }
  };
  pick(0, 0);
}

class BatchEvaluator {
 public:
  BatchEvaluator(const ChannelSpec& spec, const SearchSpace& space, const SimulationConfig& cfg)
      : spec_(spec), space_(space), cfg_(cfg) {
    const bool closed = analytic_available(spec, space.scheme);
    switch (space.evaluator) {
      case Evaluator::Analytic:
        if (!closed) throw DomainError("the analytic evaluator needs m_min = 1, one block (SISO for HLS)");
        analytic_ = true;
        break;
      case Evaluator::MonteCarlo: analytic_ = false; break;
      case Evaluator::Auto: analytic_ = closed; break;
    }
  }

  bool analytic() const { return analytic_; }

  void run(std::vector<Candidate>& batch) const {
    std::vector<Transmission> plan;
    plan.reserve(batch.size());
    for (const auto& c : batch) plan.push_back(candidate_transmission(space_, c));
    if (analytic_) {
      const auto count = std::int64_t(batch.size());
#pragma omp parallel for schedule(static) num_threads(cfg_.shards)
      for (std::int64_t i = 0; i < count; ++i) {
        batch[i].ed = analytic_expected_distortion(spec_, space_.b, plan[i]);
        batch[i].ed_stderr = 0.0;
      }
      return;
    }
    const auto points = evaluate_transmissions(spec_, space_.b, plan, cfg_);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      batch[i].ed = points[i].expected_distortion;
      batch[i].ed_stderr = points[i].ed_stderr;
    }
  }

 private:
  const ChannelSpec& spec_;
  const SearchSpace& space_;
  const SimulationConfig& cfg_;
  bool analytic_ = false;
};

bool admissible(const SearchSpace& space, const Candidate& c) {
  for (std::size_t k = 0; k < c.rates.size(); ++k) {
    if (c.rates[k] < 0.0) return false;
    if (ordered_rates(space.scheme) && k > 0 && c.rates[k] < c.rates[k - 1]) return false;
  }
  for (double s : c.split) {
    if (space.scheme == Scheme::BS ? !(s > 0.0) : s < 0.0) return false;
  }
  return true;
}

// Coordinate descent from the grid optimum: rates move by +-h, shares move
// between neighbouring layers by +-h * share_step; h halves 4 times.
Candidate refine(const BatchEvaluator& eval, const SearchSpace& space, Candidate best) {
  auto try_move = [&](Candidate next) {
    if (!admissible(space, next)) return false;
    std::vector<Candidate> one{std::move(next)};
    eval.run(one);
    if (one.front().ed < best.ed) {
      best = std::move(one.front());
      return true;
    }
    return false;
  };
  for (int level = 1; level <= 4; ++level) {
    const double h = std::ldexp(1.0, -level);
    bool improved = true;
    for (int pass = 0; improved && pass < 8; ++pass) {
      improved = false;
      for (std::size_t k = 0; k < best.rates.size(); ++k) {
        for (double sign : {1.0, -1.0}) {
          Candidate next = best;
          next.rates[k] += sign * h * space.rate_grid.step;
          improved = try_move(std::move(next)) || improved;
        }
      }
      for (std::size_t k = 0; k + 1 < best.split.size(); ++k) {
        for (double sign : {1.0, -1.0}) {
          Candidate next = best;
          next.split[k] += sign * h * space.share_step;
          next.split[k + 1] -= sign * h * space.share_step;
          improved = try_move(std::move(next)) || improved;
        }
      }
    }
  }
  return best;
}

}  // namespace

std::vector<double> GridRange::values() const {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (!(max >= min)) throw DomainError("grid max must not be below min");
  const auto count = std::int64_t(std::floor((max - min) / step + 1e-9)) + 1;
  if (count > 10'000'000) throw DomainError("grid has too many points");
  std::vector<double> out;
  out.reserve(std::size_t(count));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(min + double(i) * step);
  return out;
}

double count_candidates(const SearchSpace& space) {
  validate(space);
  const double rates = double(space.rate_grid.values().size());
  const double n = space.layers;
  const double units = share_units(space.share_step);
  if (space.layers == 0) return 1.0;
  if (space.scheme == Scheme::BS) return std::pow(rates, n) * binomial(units - 1.0, n - 1.0);
  return binomial(rates + n - 1.0, n) * binomial(units + n - 1.0, n - 1.0);
}

Transmission candidate_transmission(const SearchSpace& space, const Candidate& c) {
  Transmission tx;
  tx.scheme = space.scheme;
  tx.snr = std::pow(10.0, space.snr_db / 10.0);
  tx.rates = c.rates;
  if (space.scheme == Scheme::BS) {
    tx.cumulative_power.assign(c.split.size(), 0.0);
    double tail = 0.0;
    for (std::size_t k = c.split.size(); k-- > 0;) {
      tail += c.split[k];
      tx.cumulative_power[k] = tx.snr * tail;
    }
    tx.cumulative_power.front() = tx.snr;
  } else {
    tx.shares = c.split;
  }
  return tx;
}

SearchResult optimize_finite_snr(const ChannelSpec& spec, const SearchSpace& space,
                                 const SimulationConfig& cfg, bool keep_grid) {
  validate(space);
  if (cfg.trials < 1 || cfg.shards < 1) throw DomainError("trials and shards must be >= 1");
  if (space.scheme == Scheme::HLS && space.b < 1.0 / spec.m_min()) {
    throw DomainError("HLS needs b >= 1/m_min");
  }
  const double total = count_candidates(space);
  if (total > kMaxGridPoints) {
    throw DomainError("search grid has " + std::to_string(total) +
                      " candidates, above the limit of 1e7; coarsen the grids");
  }
  if (total < 1.0) throw InfeasibleError("the search space has no feasible candidate");

  const BatchEvaluator eval(spec, space, cfg);
  SearchResult result;
  result.evaluator = eval.analytic() ? "analytic" : "montecarlo";
  bool have = false;
  std::vector<Candidate> batch;
  auto flush = [&] {
    eval.run(batch);
    for (auto& c : batch) {
      if (!have || c.ed < result.best.ed) {
        result.best = c;
        have = true;
      }
    }
    result.candidates += std::int64_t(batch.size());
    if (keep_grid) {
      for (auto& c : batch) result.grid.push_back(std::move(c));
    }
    batch.clear();
  };
  enumerate(space, [&](const Candidate& c) {
    batch.push_back(c);
    if (batch.size() == kBatch) flush();
  });
  if (!batch.empty()) flush();
  if (!have) throw InfeasibleError("the search space has no feasible candidate");

  if (space.refine) result.best = refine(eval, space, result.best);

  result.transmission = candidate_transmission(space, result.best);
  LayerAllocation& a = result.allocation;
  a.scheme = space.scheme;
  const double lg = std::log2(result.transmission.snr);
  if (lg > 0.0) {
    for (double r : result.best.rates) a.gains.push_back(r / lg);
  }
  if (space.scheme == Scheme::BS) {
    if (lg > 0.0) {
      for (double s : result.transmission.cumulative_power) {
        a.power_exponents.push_back(std::log2(s) / lg);
      }
    }
  } else {
    a.time_shares = result.best.split;
  }
  if (space.scheme == Scheme::HLS) a.analog_share = 1.0 / (space.b * spec.m_min());
  return result;
}

}  // namespace jscc
