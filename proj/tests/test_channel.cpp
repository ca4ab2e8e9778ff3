#include <doctest.h>

#include <cmath>
#include <vector>

#include "jscc/channel.hpp"
#include "jscc/errors.hpp"

using namespace jscc;

TEST_CASE("channel spec rejects empty arrays") {
  CHECK_THROWS_AS(ChannelSpec(0, 1), DomainError);
  CHECK_THROWS_AS(ChannelSpec(1, 0), DomainError);
  CHECK_THROWS_AS(ChannelSpec(1, 1, 0), DomainError);
  const ChannelSpec s(4, 2, 3);
  CHECK(s.m_min() == 2);
  CHECK(s.m_max() == 4);
  CHECK(s.max_diversity() == 24.0);
}

TEST_CASE("dmt breakpoints, slopes and climb budgets") {
  const DmtCurve c(ChannelSpec(2, 2));
  const auto pts = c.breakpoints();
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].diversity == 4.0);
  CHECK(pts[1].diversity == 1.0);
  CHECK(pts[2].diversity == 0.0);
  CHECK(c.slope(1) == 1.0);
  CHECK(c.slope(2) == 3.0);
  CHECK(c.line_intercept(1) == doctest::Approx(2.0));
  CHECK(c.line_intercept(2) == doctest::Approx(4.0 / 3.0));
  const auto budgets = c.climb_budgets();
  CHECK(budgets[0] == 0.0);
  CHECK(budgets[1] == doctest::Approx(std::log(2.0)));
  CHECK(std::isinf(budgets[2]));

  const DmtCurve two_blocks(ChannelSpec(2, 2, 2));
  CHECK(two_blocks.max_diversity() == 8.0);
  CHECK(two_blocks.slope(1) == 2.0);
  CHECK(two_blocks.slope(2) == 6.0);
  CHECK(two_blocks.climb_budgets()[1] == doctest::Approx(2.0 * std::log(2.0)));
}

TEST_CASE("dmt evaluation and inverse") {
  const DmtCurve c(ChannelSpec(2, 2));
  CHECK(dmt_eval(c, 0.5) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(dmt_eval(c, 1.5) == doctest::Approx(0.5));
  CHECK(dmt_eval(c, 2.0 + 1e-13) == 0.0);
  CHECK_THROWS_AS(dmt_eval(c, -0.1), DomainError);
  CHECK_THROWS_AS(dmt_eval(c, 2.1), DomainError);
  for (double d : {0.0, 0.3, 1.0, 2.5, 4.0}) {
    CHECK(dmt_eval(c, dmt_inverse(c, d)) == doctest::Approx(d).epsilon(1e-12));
  }

  const DmtCurve siso(ChannelSpec(1, 1));
  CHECK(siso.intersect_rising_line(0.0, 1.0) == doctest::Approx(0.5));
  CHECK(siso.intersect_rising_line(0.0, 2.0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("dmt is convex, decreasing and symmetric in the antenna counts") {
  for (int mt = 1; mt <= 4; ++mt) {
    for (int mr = 1; mr <= 4; ++mr) {
      const DmtCurve a(ChannelSpec(mt, mr, 2));
      const DmtCurve b(ChannelSpec(mr, mt, 2));
      double prev_slope = -1e300;
      for (int k = 0; k < a.m_min(); ++k) {
        const double s = a.breakpoints()[k + 1].diversity - a.breakpoints()[k].diversity;
        CHECK(s < 0.0);
        CHECK(s >= prev_slope);
        prev_slope = s;
      }
      for (double r = 0.0; r <= a.m_min(); r += 0.125) {
        CHECK(dmt_eval(a, r) == dmt_eval(b, r));
      }
    }
  }
}

TEST_CASE("successive decoding diversity") {
  const ChannelSpec miso(4, 1);
  CHECK(sd_diversity(miso, {}, 0.2) == doctest::Approx(3.2).epsilon(1e-15));
  const std::vector<double> prefix{0.2};
  CHECK(sd_diversity(miso, prefix, 0.3) == doctest::Approx(2.0).epsilon(1e-15));
  const std::vector<double> bad{-0.1};
  CHECK_THROWS_AS(sd_diversity(miso, bad, 0.1), DomainError);
  const std::vector<double> full{0.8};
  CHECK_THROWS_AS(sd_diversity(miso, full, 0.3), DomainError);
  // With m_min = 1 every layer sits on the DMT at its cumulative gain.
  const DmtCurve c(miso);
  CHECK(sd_diversity(miso, prefix, 0.3) == doctest::Approx(dmt_eval(c, 0.5)));
}
