#include <doctest.h>

#include <cmath>
#include <numeric>

#include "jscc/analytic.hpp"
#include "jscc/errors.hpp"
#include "jscc/exponents.hpp"
#include "jscc/montecarlo.hpp"
#include "jscc/staircase.hpp"

using namespace jscc;

namespace {

SimulationConfig config(std::vector<double> grid, std::int64_t trials, std::uint64_t seed = 11) {
  SimulationConfig cfg;
  cfg.snr_grid_db = std::move(grid);
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

LayerAllocation single_gain(Scheme s, double r) {
  LayerAllocation a;
  a.scheme = s;
  a.gains = {r};
  if (s == Scheme::BS) {
    a.power_exponents = {1.0};
  } else {
    a.time_shares = {1.0};
  }
  return a;
}

LayerAllocation bs_gains(const ChannelSpec& spec, std::vector<double> gains) {
  LayerAllocation a;
  a.scheme = Scheme::BS;
  double used = 0.0;
  for (double g : gains) {
    a.power_exponents.push_back(1.0 - spec.blocks() * used);
    used += g;
  }
  a.gains = std::move(gains);
  return a;
}

bool within_sigmas(double estimate, double stderr_, double truth, double k = 3.0) {
  return std::abs(estimate - truth) <= k * stderr_ + 1e-15;
}

void check_same(const std::vector<SnrPoint>& a, const std::vector<SnrPoint>& b, double rel) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].expected_distortion ==
          doctest::Approx(b[i].expected_distortion).epsilon(rel).scale(1e-300));
    REQUIRE(a[i].layer_outage.size() == b[i].layer_outage.size());
    for (std::size_t k = 0; k < a[i].layer_outage.size(); ++k) {
      CHECK(a[i].layer_outage[k] == doctest::Approx(b[i].layer_outage[k]).epsilon(rel).scale(1e-300));
    }
  }
}

}  // namespace

TEST_CASE("rayleigh samples have unit mean power") {
  RngStream rng(5, 0);
  const ChannelSpec siso(1, 1);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += sample_channel(siso, rng).eigenvalues[0][0];
  CHECK(std::abs(sum / n - 1.0) < 0.01);
}

TEST_CASE("realization shape and determinism") {
  const ChannelSpec spec(2, 2, 3);
  RngStream a(9, 4);
  RngStream b(9, 4);
  for (int i = 0; i < 50; ++i) {
    const auto ra = sample_channel(spec, a);
    const auto rb = sample_channel(spec, b);
    REQUIRE(ra.blocks.size() == 3);
    for (int j = 0; j < 3; ++j) {
      CHECK(ra.blocks[j] == rb.blocks[j]);
      REQUIRE(ra.eigenvalues[j].size() == 2);
      CHECK(ra.eigenvalues[j][0] >= 0.0);
      CHECK(ra.eigenvalues[j][0] <= ra.eigenvalues[j][1]);
    }
  }
  const auto wide = gram_eigenvalues(Eigen::MatrixXcd::Random(2, 4));
  CHECK(wide.size() == 2);
}

TEST_CASE("instantaneous capacity") {
  ChannelRealization real;
  real.blocks = {Eigen::MatrixXcd::Ones(1, 1)};
  real.eigenvalues = {{1.0}};
  CHECK(instantaneous_capacity(real, 3.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(instantaneous_capacity(real, 1e-12) < 1e-11);

  RngStream rng(3, 0);
  const auto r = sample_channel(ChannelSpec(3, 2, 2), rng);
  double direct = 0.0;
  for (const auto& h : r.blocks) {
    const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2) + (10.0 / 3.0) * h * h.adjoint();
    direct += std::log2(m.determinant().real());
  }
  CHECK(instantaneous_capacity(r, 10.0) == doctest::Approx(direct / 2.0).epsilon(1e-12));
}

// Exact values from an independent SciPy evaluation.
TEST_CASE("closed-form evaluator matches the frozen oracle") {
  const ChannelSpec siso(1, 1);
  const auto alloc = single_gain(Scheme::SingleLayer, 2.0 / 3.0);
  const std::vector<std::pair<double, double>> ed{
      {15.0, 0.255211747078696}, {25.0, 0.13418317887179346}, {40.0, 0.045264108293052524}};
  for (auto [db, want] : ed) {
    const auto tx = transmission_at(alloc, db, 0.01);
    CHECK(analytic_expected_distortion(siso, 2.0, tx) == doctest::Approx(want).epsilon(1e-12));
  }

  LayerAllocation analog;
  analog.scheme = Scheme::HLS;
  CHECK(analytic_expected_distortion(siso, 1.0, transmission_at(analog, 20.0, 0.01)) ==
        doctest::Approx(0.04078511443456424).epsilon(1e-12));
  CHECK(analytic_expected_distortion(siso, 1.0, transmission_at(analog, 30.0, 0.01)) ==
        doctest::Approx(0.006337874070325488).epsilon(1e-12));

  const ChannelSpec miso(4, 1);
  const auto bs = bs_gains(miso, {0.2, 0.3});
  const std::vector<std::tuple<double, double, double>> outage{
      {20.0, 0.04757849479937456, 0.04757849479937456},
      {30.0, 3.6807959154307494e-05, 3.6807959154307494e-05},
      {40.0, 1.3872915527246637e-08, 1.1495890915065741e-07}};
  for (auto [db, first, second] : outage) {
    const auto p = analytic_layer_outage(miso, transmission_at(bs, db, 0.01));
    CHECK(p[0] == doctest::Approx(first).epsilon(1e-10));
    CHECK(p[1] == doctest::Approx(second).epsilon(1e-10));
  }
  CHECK(siso_outage_probability(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("single-layer SISO distortion agrees with the outage formula") {
  const ChannelSpec siso(1, 1);
  const auto alloc = single_gain(Scheme::SingleLayer, 2.0 / 3.0);
  const auto cfg = config({10.0, 15.0, 20.0, 25.0, 30.0}, 200000, 42);
  const auto est = simulate(siso, alloc, 2.0, cfg);
  for (const auto& p : est.per_snr) {
    const double snr = std::pow(10.0, p.snr_db / 10.0);
    const double rate = 2.0 / 3.0 * std::log2(snr);
    const double out = siso_outage_probability(rate, snr);
    const double truth = (1.0 - out) * std::exp2(-2.0 * rate) + out;
    CAPTURE(p.snr_db);
    CHECK(within_sigmas(p.expected_distortion, p.ed_stderr, truth));
    CHECK(within_sigmas(p.layer_outage[0], p.outage_stderr[0], out));
    CHECK(p.expected_distortion > 0.0);
    CHECK(p.expected_distortion <= 1.0);
  }
}

TEST_CASE("importance sampling recovers rare BS outages") {
  const ChannelSpec miso(4, 1);
  const auto bs = bs_gains(miso, {0.2, 0.3});
  auto cfg = config({20.0, 40.0, 60.0}, 50000, 3);
  cfg.tilt = 0.5;
  const auto est = simulate(miso, bs, 1.0, cfg);
  for (const auto& p : est.per_snr) {
    const auto exact = analytic_layer_outage(miso, transmission_at(bs, p.snr_db, cfg.epsilon0));
    CAPTURE(p.snr_db);
    for (int k = 0; k < 2; ++k) {
      CHECK(within_sigmas(p.layer_outage[k], p.outage_stderr[k], exact[k], 4.0));
      CHECK(p.outage_stderr[k] < 0.2 * exact[k]);
    }
  }
}

TEST_CASE("parallel kernel agrees with the serial reference") {
  const ChannelSpec mimo(2, 2);
  const ChannelSpec blocky(3, 2, 2);
  auto cfg = config({}, 3000, 17);
  cfg.shards = 3;

  std::vector<Transmission> ls_plan;
  const auto ls = solve_ls_staircase(DmtCurve(mimo), 2.0, 2).allocation;
  const auto hls = solve_hls_staircase(DmtCurve(mimo), 2.0, 2).allocation;
  for (double db : {10.0, 20.0}) {
    ls_plan.push_back(transmission_at(ls, db, 0.01));
    ls_plan.push_back(transmission_at(hls, db, 0.01));
  }
  check_same(evaluate_transmissions(mimo, 2.0, ls_plan, cfg),
             evaluate_transmissions_reference(mimo, 2.0, ls_plan, cfg), 1e-12);

  std::vector<Transmission> bs_plan;
  const auto bs = bs_allocation(ChannelSpec(3, 2), 1.5, 3);
  CHECK(bs.antenna_reduction == 1);
  const auto hls_blocky = solve_hls_staircase(DmtCurve(blocky), 3.0, 2).allocation;
  for (double db : {15.0, 30.0}) {
    bs_plan.push_back(transmission_at(bs, db, 0.01));
    bs_plan.push_back(transmission_at(hls_blocky, db, 0.01));
  }
  check_same(evaluate_transmissions(blocky, 3.0, bs_plan, cfg),
             evaluate_transmissions_reference(blocky, 3.0, bs_plan, cfg), 1e-12);

  cfg.tilt = 0.3;
  check_same(evaluate_transmissions(blocky, 3.0, bs_plan, cfg),
             evaluate_transmissions_reference(blocky, 3.0, bs_plan, cfg), 1e-12);
}

TEST_CASE("estimates do not depend on the shard count") {
  const ChannelSpec spec(2, 2, 2);
  const auto alloc = bs_allocation(spec, 20.0, 3);
  auto cfg = config({10.0, 20.0, 30.0}, 5000, 1234);
  std::vector<MonteCarloEstimate> runs;
  for (int shards : {1, 2, 4, 7}) {
    cfg.shards = shards;
    runs.push_back(simulate(spec, alloc, 20.0, cfg));
  }
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < r.per_snr.size(); ++i) {
      CHECK(r.per_snr[i].expected_distortion == runs[0].per_snr[i].expected_distortion);
      CHECK(r.per_snr[i].ed_stderr == runs[0].per_snr[i].ed_stderr);
      CHECK(r.per_snr[i].layer_outage == runs[0].per_snr[i].layer_outage);
    }
    CHECK(r.fitted_exponent == runs[0].fitted_exponent);
  }
}

TEST_CASE("one-layer BS is the single-layer scheme trial by trial") {
  const ChannelSpec spec(2, 3);
  const auto cfg = config({5.0, 15.0, 25.0}, 20000, 8);
  const auto ls = simulate(spec, single_gain(Scheme::LS, 0.6), 1.5, cfg);
  const auto bs = simulate(spec, single_gain(Scheme::BS, 0.6), 1.5, cfg);
  for (std::size_t i = 0; i < ls.per_snr.size(); ++i) {
    CHECK(ls.per_snr[i].expected_distortion == bs.per_snr[i].expected_distortion);
    CHECK(ls.per_snr[i].layer_outage == bs.per_snr[i].layer_outage);
  }
}

TEST_CASE("distortion edge cases") {
  const ChannelSpec siso(1, 1);
  const auto cfg = config({20.0}, 2000);
  CHECK(ls_expected_distortion(siso, single_gain(Scheme::LS, 0.0), 1.0, 20.0, cfg)
            .expected_distortion == 1.0);

  // Every layer fails, so the analog refinement never applies.
  LayerAllocation hopeless;
  hopeless.scheme = Scheme::HLS;
  hopeless.gains = {40.0};
  hopeless.time_shares = {1.0};
  const auto p = hls_expected_distortion(siso, hopeless, 2.0, 20.0, cfg);
  CHECK(p.expected_distortion == 1.0);
  CHECK(p.layer_outage[0] == 1.0);

  // High SNR at a fixed rate: the outage disappears.
  const auto fixed = transmission_at(single_gain(Scheme::LS, 0.01), 60.0, 0.01);
  CHECK(evaluate_transmissions(siso, 1.0, std::span(&fixed, 1), cfg)[0].expected_distortion ==
        doctest::Approx(std::exp2(-fixed.rates[0])).epsilon(1e-3));

  CHECK_THROWS_AS(hls_expected_distortion(siso, hopeless, 0.5, 20.0, cfg), DomainError);
  CHECK_THROWS_AS(bs_expected_distortion(siso, hopeless, 2.0, 20.0, cfg), DomainError);
  CHECK_THROWS_AS(transmission_at(single_gain(Scheme::LS, 0.5), -3.0, 0.01), DomainError);
  CHECK_THROWS_AS(transmission_at(bs_gains(siso, {0.3, 0.3}), 0.0, 0.01), InfeasibleError);
}

TEST_CASE("layer outages are nested and fall with SNR") {
  const ChannelSpec spec(2, 2);
  const auto cfg = config({10.0, 20.0, 30.0}, 20000, 99);
  for (const auto& alloc : {solve_ls_staircase(DmtCurve(spec), 3.0, 3).allocation,
                            bs_allocation(spec, 3.0, 3)}) {
    const auto est = simulate(spec, alloc, 3.0, cfg);
    for (std::size_t i = 0; i < est.per_snr.size(); ++i) {
      const auto& o = est.per_snr[i].layer_outage;
      CHECK(std::is_sorted(o.begin(), o.end()));
      if (i > 0) {
        const auto& prev = est.per_snr[i - 1];
        CHECK(est.per_snr[i].expected_distortion <=
              prev.expected_distortion + 3.0 * (prev.ed_stderr + est.per_snr[i].ed_stderr));
      }
    }
  }
}

TEST_CASE("SIMO and MISO outages coincide once the power split is undone") {
  const auto cfg = config({}, 100000, 21);
  LayerAllocation a = single_gain(Scheme::LS, 0.0);
  for (double rate : {0.5, 2.0, 4.0}) {
    Transmission simo = transmission_at(a, 10.0, 0.01);
    simo.rates = {rate};
    Transmission miso = simo;
    miso.snr *= 2.0;
    const auto ps = evaluate_transmissions(ChannelSpec(1, 2), 1.0, std::span(&simo, 1), cfg)[0];
    const auto pm = evaluate_transmissions(ChannelSpec(2, 1), 1.0, std::span(&miso, 1), cfg)[0];
    const double se = std::hypot(ps.outage_stderr[0], pm.outage_stderr[0]);
    CHECK(std::abs(ps.layer_outage[0] - pm.layer_outage[0]) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("outage slopes follow the DMT") {
  for (auto [mt, r] : std::vector<std::pair<int, double>>{{1, 0.25}, {1, 0.5}, {4, 0.25}, {4, 0.5}}) {
    const ChannelSpec spec(mt, 1);
    auto cfg = config({30.0, 40.0, 50.0, 60.0, 70.0}, 40000, 5);
    cfg.tilt = 1.0 - r;
    cfg.fit_fraction = 1.0;
    const auto est = simulate(spec, single_gain(Scheme::LS, r), 1.0, cfg);
    std::vector<double> out;
    for (const auto& p : est.per_snr) out.push_back(p.layer_outage[0]);
    const auto fit = fit_tail(cfg.snr_grid_db, out, 1.0);
    CAPTURE(mt);
    CAPTURE(r);
    CHECK(std::abs(fit.slope - dmt_eval(DmtCurve(spec), r)) <= 0.2);
  }
}

TEST_CASE("exponent fitting") {
  std::vector<std::pair<double, double>> law;
  std::vector<std::pair<double, double>> flat;
  for (double db = 10.0; db <= 40.0; db += 10.0) {
    law.emplace_back(db, std::pow(10.0, -2.0 * db / 10.0));
    flat.emplace_back(db, 0.3);
  }
  const auto f = estimate_exponent(law);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.stderr_ < 1e-12);
  CHECK(estimate_exponent(flat).slope == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(estimate_exponent(std::span(law).first(2)), DomainError);
  flat[1].second = 0.0;
  CHECK_THROWS_AS(estimate_exponent(flat), DomainError);

  const std::vector<double> db{0, 10, 20, 30, 40, 50};
  std::vector<double> v;
  for (double d : db) v.push_back(d < 25 ? 0.5 : std::pow(10.0, -d / 10.0));
  CHECK(fit_tail(db, v, 0.5).slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isnan(fit_tail(std::span(db).first(2), std::span(v).first(2), 0.5).slope));
}

TEST_CASE("simulation config validation") {
  const ChannelSpec siso(1, 1);
  const auto a = single_gain(Scheme::LS, 0.5);
  auto bad = config({20.0, 10.0}, 10);
  CHECK_THROWS_AS(simulate(siso, a, 1.0, bad), DomainError);
  bad = config({}, 10);
  CHECK_THROWS_AS(simulate(siso, a, 1.0, bad), DomainError);
  bad = config({10.0}, 0);
  CHECK_THROWS_AS(simulate(siso, a, 1.0, bad), DomainError);
  bad = config({10.0}, 10);
  bad.epsilon0 = 0.0;
  CHECK_THROWS_AS(simulate(siso, a, 1.0, bad), DomainError);
  bad.epsilon0 = 0.01;
  bad.fit_fraction = 0.0;
  CHECK_THROWS_AS(simulate(siso, a, 1.0, bad), DomainError);
}
