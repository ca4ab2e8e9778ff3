#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "jscc/errors.hpp"
#include "jscc/exponents.hpp"
#include "jscc/staircase.hpp"

using namespace jscc;

namespace {

std::vector<double> random_shares(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> t(n);
  for (double& x : t) x = u(rng);
  const double s = std::accumulate(t.begin(), t.end(), 0.0);
  for (double& x : t) x /= s;
  // Make the sum exactly one in floating point.
  t.back() = 1.0 - std::accumulate(t.begin(), t.end() - 1, 0.0);
  return t;
}

}  // namespace

// Frozen from an independent bracketing root-finder on the staircase.
TEST_CASE("staircase exponents match the root-finding oracle") {
  CHECK(solve_ls_staircase(DmtCurve(ChannelSpec(2, 2)), 2.0, 2).exponent ==
        doctest::Approx(1.75).epsilon(1e-12));
  CHECK(solve_hls_staircase(DmtCurve(ChannelSpec(2, 2, 2)), 3.0, 3).exponent ==
        doctest::Approx(3.2834797214550786).epsilon(1e-12));
  CHECK(solve_ls_staircase(DmtCurve(ChannelSpec(3, 2)), 1.0, 4).exponent ==
        doctest::Approx(1.5028196921200947).epsilon(1e-12));
  const double deep = solve_ls_staircase(DmtCurve(ChannelSpec(1, 1)), 1.0, 1000).exponent;
  CHECK(deep == doctest::Approx(0.6319366957112238).epsilon(1e-12));
  CHECK(std::abs(deep - (1.0 - std::exp(-1.0))) < 1e-3);
}

TEST_CASE("equal-share staircase on single-antenna-side channels") {
  for (double m : {1.0, 2.0, 4.0}) {
    const DmtCurve c(ChannelSpec(int(m), 1));
    for (int n : {1, 2, 3, 8}) {
      for (double b : {0.5, 1.0, 2.0, 5.0}) {
        const double ls = m * (1.0 - std::pow(1.0 + b / (n * m), -n));
        CHECK(solve_ls_staircase(c, b, n).exponent == doctest::Approx(ls).epsilon(1e-12));
        if (b >= 1.0) {
          const double hls = m - (m - 1.0) * std::pow(1.0 + (b - 1.0) / (n * m), -n);
          CHECK(solve_hls_staircase(c, b, n).exponent == doctest::Approx(hls).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("staircase residuals vanish on random channels and shares") {
  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<int> ant(1, 4);
  std::uniform_int_distribution<int> blk(1, 3);
  std::uniform_int_distribution<int> lay(1, 16);
  std::uniform_real_distribution<double> bw(0.05, 10.0);
  for (int trial = 0; trial < 400; ++trial) {
    const ChannelSpec spec(ant(rng), ant(rng), blk(rng));
    const DmtCurve curve(spec);
    const int n = lay(rng);
    const double b = bw(rng);
    const auto t = trial % 2 == 0 ? std::vector<double>{} : random_shares(rng, n);
    CAPTURE(spec.m_t());
    CAPTURE(spec.m_r());
    CAPTURE(spec.blocks());
    CAPTURE(n);
    CAPTURE(b);

    const auto ls = solve_ls_staircase(curve, b, n, t);
    for (double r : ls_staircase_residuals(curve, b, ls.allocation)) CHECK(std::abs(r) < 1e-10);
    CHECK(ls_exponent_of(curve, b, ls.allocation) == doctest::Approx(ls.exponent).epsilon(1e-12));
    CHECK(std::is_sorted(ls.allocation.gains.begin(), ls.allocation.gains.end()));

    const double hb = b + 1.0 / spec.m_min();
    const auto hls = solve_hls_staircase(curve, hb, n, t);
    for (double r : hls_staircase_residuals(curve, hb, hls.allocation)) CHECK(std::abs(r) < 1e-10);
    CHECK(hls_exponent_of(curve, hb, hls.allocation) == doctest::Approx(hls.exponent).epsilon(1e-12));
    CHECK(hls.allocation.analog_share == doctest::Approx(1.0 / (hb * spec.m_min())));
  }
}

TEST_CASE("BS allocation equalizes decay terms within the budget") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ant(1, 4);
  std::uniform_int_distribution<int> blk(1, 3);
  std::uniform_int_distribution<int> lay(1, 16);
  std::uniform_real_distribution<double> bw(0.05, 40.0);
  int equalized = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const ChannelSpec spec(ant(rng), ant(rng), blk(rng));
    const int n = lay(rng);
    const double b = bw(rng);
    CAPTURE(spec.m_t());
    CAPTURE(spec.m_r());
    CAPTURE(spec.blocks());
    CAPTURE(n);
    CAPTURE(b);
    const auto alloc = bs_allocation(spec, b, n);
    const double L = spec.blocks();
    const double used = std::accumulate(alloc.gains.begin(), alloc.gains.end(), 0.0);
    CHECK(used <= 1.0 / L + 1e-12);
    for (double r : alloc.gains) CHECK(r >= 0.0);
    const double sat = L * L * spec.m_t() * spec.m_r() - L * (spec.m_t() + spec.m_r() - 1);
    if (spec.blocks() > 1 && b < sat) {
      CHECK(bs_exponent_of(spec, b, alloc) == doctest::Approx(b / L).epsilon(1e-12));
      continue;
    }
    const auto terms = bs_decay_terms(spec, b, alloc);
    const auto [lo, hi] = std::minmax_element(terms.begin(), terms.end());
    CHECK(*hi - *lo < 1e-10 * std::max(1.0, *hi));
    ++equalized;
  }
  CHECK(equalized > 200);
}

TEST_CASE("finite-layer exponents increase with the layer count") {
  for (auto [mt, mr] : std::vector<std::pair<int, int>>{{1, 1}, {4, 1}, {2, 2}}) {
    const ChannelSpec spec(mt, mr);
    const DmtCurve curve(spec);
    for (double b : {0.5, 2.0, 5.0}) {
      double prev_ls = 0.0;
      double prev_bs = 0.0;
      for (int n = 1; n <= 1024; n *= 2) {
        const double ls = solve_ls_staircase(curve, b, n).exponent;
        const double bs = exponent_bs_finite(spec, b, n).exponent;
        CHECK(ls >= prev_ls - 1e-12);
        CHECK(bs >= prev_bs - 1e-12);
        prev_ls = ls;
        prev_bs = bs;
      }
      CHECK(prev_ls <= exponent_ls_infinite(spec, b).exponent + 1e-12);
      CHECK(prev_ls == doctest::Approx(exponent_ls_infinite(spec, b).exponent).epsilon(1e-2));
    }
  }
}

TEST_CASE("staircase input checks") {
  const DmtCurve c(ChannelSpec(2, 2));
  const std::vector<double> short_t{1.0};
  CHECK_THROWS_AS(solve_ls_staircase(c, 1.0, 2, short_t), DomainError);
  const std::vector<double> not_one{0.5, 0.6};
  CHECK_THROWS_AS(solve_ls_staircase(c, 1.0, 2, not_one), DomainError);
  const std::vector<double> negative{1.5, -0.5};
  CHECK_THROWS_AS(solve_ls_staircase(c, 1.0, 2, negative), DomainError);
  CHECK_THROWS_AS(solve_hls_staircase(c, 0.2, 2), DomainError);
  CHECK_THROWS_AS(bs_allocation(ChannelSpec(2, 2), 0.0, 2), DomainError);
  CHECK_THROWS_AS(bs_allocation(ChannelSpec(2, 2), 1.0, 0), DomainError);

  LayerAllocation unordered;
  unordered.scheme = Scheme::LS;
  unordered.gains = {0.8, 0.2};
  unordered.time_shares = {0.5, 0.5};
  CHECK_THROWS_AS(ls_exponent_of(c, 1.0, unordered), DomainError);

  const auto analog = solve_hls_staircase(c, 2.0, 0);
  CHECK(analog.exponent == 1.0);
  CHECK(analog.allocation.layers() == 0);
}
