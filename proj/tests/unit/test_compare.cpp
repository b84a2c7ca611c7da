#include <cmath>
#include <numeric>

#include <doctest.h>

#include "bvarx/compare.hpp"
#include "bvarx/errors.hpp"
#include "bvarx/random.hpp"
#include "oracles.hpp"

using namespace bvarx;

namespace {

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double Phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Upper-alpha quantile of the studentized range of k normals (infinite dof)
// by quadrature and bisection, divided by sqrt(2).
double nemenyi_oracle(int k, double alpha) {
  auto cdf = [k](double q) {
    const int n = 4000;
    const double lo = -9.0, hi = 9.0, h = (hi - lo) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double z = lo + i * h;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * phi(z) * std::pow(Phi(z) - Phi(z - q), k - 1);
    }
    return k * s * h / 3.0;
  };
  double a = 0.0, b = 10.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (a + b);
    (cdf(mid) < 1.0 - alpha ? a : b) = mid;
  }
  return 0.5 * (a + b) / std::sqrt(2.0);
}

}  // namespace

TEST_CASE("extremal score cases") {
  CHECK(extremal_score(3.0, 1.0, 2.0, 0.5) == doctest::Approx(0.5 * (2.0 - 1.0)));
  CHECK(extremal_score(1.0, 3.0, 2.0, 0.25) == doctest::Approx(0.25 * (3.0 - 2.0)));
  CHECK(extremal_score(1.0, 3.0, 5.0, 0.5) == 0.0);
  CHECK(extremal_score(1.0, 3.0, 0.0, 0.5) == 0.0);
  for (double theta : {-1.0, 0.0, 2.0, 2.5})
    CHECK(extremal_score(2.0, 2.0, theta, 0.3) == 0.0);
  CHECK(extremal_score(3.0, 1.0, 2.0, 0.5) >= 0.0);
  CHECK_THROWS_AS(extremal_score(1, 2, 3, 1.0), ConfigError);
}

TEST_CASE("integrated extremal score is a quarter of the squared error at alpha 1/2") {
  for (auto [x, y] : {std::pair{0.3, 1.7}, std::pair{2.0, -1.0}}) {
    const int n = 200000;
    // score jumps at x and y, so keep them on cell edges; it is zero outside
    const double lo = std::min(x, y), hi = std::max(x, y), h = (hi - lo) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += extremal_score(x, y, lo + (i + 0.5) * h, 0.5) * h;
    CHECK(s == doctest::Approx((x - y) * (x - y) / 4.0).epsilon(1e-8));
    CHECK(extremal_score(x, y, lo - 0.5, 0.5) == 0.0);
    CHECK(extremal_score(x, y, hi + 0.5, 0.5) == 0.0);
  }
}

TEST_CASE("Murphy differences") {
  Rng rng = make_stream(3, 0);
  const Eigen::VectorXd y = standard_normal(rng, 100, 1).col(0);
  const Eigen::VectorXd fa = y + 0.5 * standard_normal(rng, 100, 1).col(0);
  const Eigen::VectorXd fb = y + 0.8 * standard_normal(rng, 100, 1).col(0);
  const auto grid = murphy_grid(fa, fb, y, 51);

  const MurphyCurve same = murphy_diff(fa, fa, y, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(same.diff[i] == 0.0);
    CHECK(same.variance[i] == 0.0);
  }
  CHECK(same.lag == 4);

  const MurphyCurve ab = murphy_diff(fa, fb, y, grid);
  const MurphyCurve ba = murphy_diff(fb, fa, y, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(ab.diff[i] == -ba.diff[i]);
    CHECK(ab.band_lo[i] == -ba.band_hi[i]);
    CHECK(ab.band_hi[i] == -ba.band_lo[i]);
    CHECK(ab.band_lo[i] <= ab.diff[i]);
    CHECK(ab.diff[i] <= ab.band_hi[i]);
  }
  // 90% band: z = 1.6448536...
  const std::size_t mid = 25;
  CHECK(ab.band_hi[mid] - ab.diff[mid] == doctest::Approx(1.6448536269514722 * std::sqrt(ab.variance[mid])));

  CHECK_THROWS_AS(murphy_diff(fa, fb.head(99), y, grid), DataError);
  CHECK_THROWS_AS(murphy_diff(fa, fb, y, {1.0, 0.5}), ConfigError);
}

TEST_CASE("Newey-West variance") {
  CHECK(newey_west_bandwidth(100) == 4);
  CHECK(newey_west_bandwidth(50) == 3);
  CHECK(newey_west_var(Eigen::VectorXd::Constant(20, 3.0), 3) == 0.0);

  Eigen::VectorXd x(5);
  x << 1, 3, 2, 5, 4;  // mean 3, centered (-2, 0, -1, 2, 1)
  CHECK(newey_west_var(x, 0) == doctest::Approx((4 + 0 + 1 + 4 + 1) / 5.0 / 5.0));
  // gamma1 = (0*-2 + -1*0 + 2*-1 + 1*2)/5 = 0; gamma2 = (-1*-2 + 2*0 + 1*-1)/5 = 0.2
  // lag 2: w1 = 2/3, w2 = 1/3
  CHECK(newey_west_var(x, 2) == doctest::Approx((2.0 + 2.0 * (1.0 / 3.0) * 0.2) / 5.0));
  CHECK_THROWS_AS(newey_west_var(x, 5), ConfigError);

  Rng rng = make_stream(5, 0);
  const Eigen::VectorXd big = standard_normal(rng, 40000, 1).col(0);
  CHECK(newey_west_var(big, 4) * 40000.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("kernel weights") {
  CHECK(kernel_weight(HacKernel::Bartlett, 1, 4) == doctest::Approx(0.8));
  CHECK(kernel_weight(HacKernel::Bartlett, 5, 4) == 0.0);
  CHECK(kernel_weight(HacKernel::Rectangular, 3, 3) == 1.0);
  CHECK(kernel_weight(HacKernel::Parzen, 1, 4) == doctest::Approx(1.0 - 6.0 / 16.0 + 6.0 / 64.0));
  CHECK(kernel_weight(HacKernel::Parzen, 3, 4) == doctest::Approx(2.0 / 64.0));
  CHECK(kernel_weight(HacKernel::Parzen, 4, 4) == 0.0);
}

TEST_CASE("chi-square tail against a series oracle") {
  const std::pair<double, double> pts[] = {{0.5, 1}, {1.0, 1}, {3.84, 1}, {2.0, 2},  {5.99, 2},  {0.1, 3},
                                           {7.8, 3}, {4.0, 4}, {12.0, 5}, {20.0, 7}, {3.0, 10}, {25.0, 12}};
  for (auto [x, k] : pts) CHECK(std::abs(chi_square_sf(x, k) - testing::chi2_sf_series(x, k)) < 1e-10);
  CHECK(chi_square_sf(0.0, 3) == 1.0);
}

TEST_CASE("multivariate DM") {
  Rng rng = make_stream(7, 0);
  const Eigen::MatrixXd base = standard_normal(rng, 60, 1).cwiseAbs();
  Eigen::MatrixXd same(60, 2);
  same << base, base;
  const auto deg = dm_multivariate(same);
  CHECK(deg.degenerate);
  CHECK(deg.p_value == 1.0);
  CHECK(deg.dof == 1);

  const Eigen::MatrixXd losses = standard_normal(rng, 80, 3).cwiseAbs();
  const auto r = dm_multivariate(losses);
  CHECK(r.dof == 2);
  CHECK(r.correction == "hln");
  CHECK(r.p_value >= 0.0);
  CHECK(r.p_value <= 1.0);
  CHECK(dm_multivariate(losses * 17.0).statistic == doctest::Approx(r.statistic).epsilon(1e-10));

  // k = 2, q = 1: T dbar^2 / var(d) times (T - 1)/T.
  const Eigen::VectorXd d = losses.col(0) - losses.col(1);
  const double var = (d.array() - d.mean()).square().mean();
  const auto two = dm_multivariate(losses.leftCols(2));
  CHECK(two.statistic == doctest::Approx(80.0 * d.mean() * d.mean() / var * (79.0 / 80.0)).epsilon(1e-12));
  DmOptions raw;
  raw.small_sample_correction = false;
  CHECK(dm_multivariate(losses.leftCols(2), raw).statistic ==
        doctest::Approx(80.0 * d.mean() * d.mean() / var).epsilon(1e-12));

  DmOptions first;
  first.pairing = DmPairing::AllVsFirst;
  CHECK(dm_multivariate(losses, first).statistic == doctest::Approx(r.statistic).epsilon(1e-9));

  CHECK_THROWS_AS(dm_multivariate(losses.leftCols(1)), ConfigError);
}

TEST_CASE("unconditional GW") {
  const auto deg = gw_unconditional(Eigen::MatrixXd::Zero(30, 1));
  CHECK(deg.degenerate);
  CHECK(deg.p_value == 1.0);

  Rng rng = make_stream(9, 0);
  const Eigen::MatrixXd d = standard_normal(rng, 125, 2);
  const auto r = gw_unconditional(d);
  CHECK(r.lag == 5);
  CHECK(r.dof == 2);
  CHECK(r.kernel == HacKernel::Parzen);
  CHECK(gw_unconditional(d * 0.01).statistic == doctest::Approx(r.statistic).epsilon(1e-10));

  const Eigen::VectorXd one = d.col(0);
  const Eigen::VectorXd c = one.array() - one.mean();
  double lrv = c.squaredNorm() / 125.0;
  for (int j = 1; j <= 5; ++j)
    lrv += 2.0 * kernel_weight(HacKernel::Parzen, j, 5) * c.tail(125 - j).dot(c.head(125 - j)) / 125.0;
  CHECK(gw_unconditional(one).statistic == doctest::Approx(125.0 * one.mean() * one.mean() / lrv).epsilon(1e-12));
}

TEST_CASE("Nemenyi critical values") {
  for (double alpha : {0.01, 0.05, 0.10})
    for (int k = 2; k <= 20; ++k) CHECK(nemenyi_q(k, alpha) == doctest::Approx(nemenyi_oracle(k, alpha)).epsilon(1e-6));
  CHECK(nemenyi_q(2, 0.05) == doctest::Approx(1.960).epsilon(1e-3));
  CHECK(nemenyi_q(10, 0.05) == doctest::Approx(3.164).epsilon(1e-3));
  CHECK(nemenyi_q(10, 0.10) == doctest::Approx(2.920).epsilon(1e-3));
  CHECK_THROWS_AS(nemenyi_q(21, 0.05), ConfigError);
  CHECK_THROWS_AS(nemenyi_q(5, 0.02), ConfigError);
}

TEST_CASE("MCB ranks and critical distance") {
  Eigen::MatrixXd dom(4, 2);
  dom << 1, 2, 0.5, 0.7, 3, 9, -1, 0;
  const auto r = mcb(dom);
  CHECK(r.mean_ranks(0) == 1.0);
  CHECK(r.mean_ranks(1) == 2.0);
  CHECK(r.best == 0);

  const auto tie = mcb(Eigen::MatrixXd::Constant(5, 6, 2.5));
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(tie.mean_ranks(i) == 3.5);

  Rng rng = make_stream(11, 0);
  Eigen::MatrixXd scores = standard_normal(rng, 12, 7);
  scores(3, 2) = scores(3, 5);
  scores.row(8).setConstant(1.0);
  const auto m = mcb(scores);
  for (Eigen::Index d = 0; d < 12; ++d) CHECK(m.ranks.row(d).sum() == 7.0 * 8.0 / 2.0);
  CHECK(m.ranks(3, 2) == m.ranks(3, 5));
  CHECK(m.upper(0) - m.lower(0) == doctest::Approx(m.cd));

  for (int d : {10, 14, 70})
    CHECK(critical_distance(15, d, 0.05) == doctest::Approx(nemenyi_q(15, 0.05) * std::sqrt(15.0 * 16.0 / (6.0 * d))));
  CHECK(critical_distance(15, 10, 0.05) == doctest::Approx(3.3912302838 * 2.0).epsilon(1e-9));
}
