#include <cmath>

#include <doctest.h>

#include "bvarx/errors.hpp"
#include "bvarx/metrics.hpp"

using namespace bvarx;
using V = Eigen::VectorXd;

namespace {

V vec(std::initializer_list<double> xs) {
  V v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("RMSE") {
  CHECK(rmse(vec({1, 2, 3}), vec({1, 2, 3})) == 0.0);
  CHECK(rmse(vec({0, 0}), vec({3, 4})) == doctest::Approx(3.5355339059327378).epsilon(1e-15));
  CHECK(rmse(vec({1, -2, 5}), vec({1.5, -1.5, 5.5})) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rmse(vec({1, -2, 5}), vec({-1, -4, 3})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(rmse(vec({1}), vec({1, 2})), DataError);
  CHECK_THROWS_AS(rmse(V(0), V(0)), DataError);
}

TEST_CASE("SMAPE") {
  CHECK(smape(vec({2, 3}), vec({2, 3})) == 0.0);
  CHECK(smape(vec({1}), vec({3})) == 1.0);
  CHECK(smape(vec({1}), vec({-1})) == 2.0);
  CHECK(smape(vec({1}), vec({3}), SmapeMode::Percent) == 100.0);

  const V a = vec({0.5, 4, -2, 7}), f = vec({1, 3, -2.5, 6});
  CHECK(smape(a, f) == doctest::Approx(smape(f, a)).epsilon(1e-15));
  CHECK(smape(a, f, SmapeMode::Percent) == doctest::Approx(100.0 * smape(a, f)).epsilon(1e-15));

  std::size_t dropped = 7;
  CHECK(smape(vec({0, 1}), vec({0, 3}), SmapeMode::Fraction, &dropped) == 1.0);
  CHECK(dropped == 1);
  CHECK(smape(vec({0}), vec({0}), SmapeMode::Fraction, &dropped) == 0.0);
  CHECK(dropped == 1);
  CHECK_THROWS_AS(parse_smape_mode("ratio"), ConfigError);
}

TEST_CASE("MASE") {
  // Linear trend plus a period-4 pattern: every seasonal difference is 4c.
  const int season = 4, d = 24, h = 4;
  const double c = 0.25;
  const double pattern[] = {1.0, -2.0, 0.5, 3.0};
  V full(d + h);
  for (int t = 0; t < d + h; ++t) full(t) = pattern[t % season] + c * t;
  const V insample = full.head(d), actual = full.tail(h);
  V naive(h);
  for (int j = 0; j < h; ++j) naive(j) = full(d + j - season);
  CHECK(mase(actual, naive, insample, season) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mase(actual, actual, insample, season) == 0.0);
  CHECK(mase(2.0 * actual, 2.0 * naive.array().matrix() + V::Constant(h, 0.3), 2.0 * insample, season) ==
        doctest::Approx(mase(actual, naive + V::Constant(h, 0.15), insample, season)).epsilon(1e-12));

  // Random-walk scale by hand: |2-1|+|4-2|+|3-4| = 4 over 3 steps.
  CHECK(mase(vec({5}), vec({4}), vec({1, 2, 4, 3})) == doctest::Approx(0.75).epsilon(1e-15));

  CHECK_THROWS_AS(mase(vec({1}), vec({2}), vec({3, 3, 3})), NumericalError);
  CHECK_THROWS_AS(mase(vec({1}), vec({2}), vec({3, 4}), 2), DataError);
}

TEST_CASE("Theil U1") {
  CHECK(theil_u1(vec({1, 2, 3}), vec({1, 2, 3})) == 0.0);
  CHECK(theil_u1(vec({1, -2, 3}), vec({-1, 2, -3})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(theil_u1(vec({1, 1}), vec({0, 0})) == 1.0);
  // sqrt(mean e^2) = 1; rms(a) = sqrt(5/2), rms(f) = sqrt(13/2)
  CHECK(theil_u1(vec({1, 2}), vec({2, 3})) ==
        doctest::Approx(1.0 / (std::sqrt(2.5) + std::sqrt(6.5))).epsilon(1e-15));
  CHECK_THROWS_AS(theil_u1(vec({0, 0}), vec({0, 0})), NumericalError);
}

TEST_CASE("MDAPE") {
  CHECK(mdape(vec({3, 4}), vec({3, 4})) == 0.0);
  CHECK(mdape(vec({10, 10, 10}), vec({11, 12, 13})) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(mdape(vec({4}), vec({5})) == doctest::Approx(25.0).epsilon(1e-15));
  CHECK(mdape(vec({10, 10, 10, 10}), vec({11, 12, 13, 14})) == doctest::Approx(25.0).epsilon(1e-15));
  std::size_t dropped = 0;
  CHECK(mdape(vec({0, 10}), vec({1, 12}), &dropped) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(dropped == 1);
  CHECK(std::isnan(mdape(vec({0}), vec({1}), &dropped)));
}

TEST_CASE("metric report layout") {
  Eigen::MatrixXd actual(3, 2), forecast(3, 2), insample(6, 2);
  actual << 1, 10, 2, 11, 3, 12;
  forecast << 1.5, 9, 2.5, 11, 2, 13;
  insample << 0, 5, 1, 6, 0.5, 8, 1.5, 7, 1, 9, 2, 10;
  const auto rows = metric_report("m", {"a", "b"}, actual, forecast, insample);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].variable == "b");
  CHECK(rows[1].horizon == 3);
  CHECK(rows[0].rmse == rmse(actual.col(0), forecast.col(0)));
  CHECK(rows[1].mase == mase(actual.col(1), forecast.col(1), insample.col(1)));
  for (const auto& r : rows) {
    CHECK(r.theil_u1 >= 0.0);
    CHECK(r.theil_u1 <= 1.0);
    CHECK(r.smape <= 2.0);
  }
  MetricOptions pct;
  pct.smape_mode = SmapeMode::Percent;
  const auto rows_pct = metric_report("m", {"a", "b"}, actual, forecast, insample, pct);
  CHECK(rows_pct[0].smape == doctest::Approx(100.0 * rows[0].smape).epsilon(1e-15));
}
