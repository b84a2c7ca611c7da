#include <cmath>
#include <numbers>

#include <doctest.h>

#include "bvarx/errors.hpp"
#include "bvarx/random.hpp"
#include "bvarx/wavelet.hpp"

using namespace bvarx;

namespace {

Eigen::VectorXd ar1(Eigen::Index n, double rho, Rng& rng) {
  const Eigen::VectorXd e = standard_normal(rng, n, 1).col(0);
  Eigen::VectorXd x(n);
  x(0) = e(0) / std::sqrt(1 - rho * rho);
  for (Eigen::Index t = 1; t < n; ++t) x(t) = rho * x(t - 1) + e(t);
  return x;
}

}  // namespace

TEST_CASE("scales and periods") {
  const auto s = default_scales(256, 1.0);
  CHECK(s.front() == 2.0);
  CHECK(s.back() <= 64.0 + 1e-9);
  CHECK(s.back() > 64.0 / std::exp2(1.0 / 12.0));
  CHECK(s[12] == doctest::Approx(4.0));
  CHECK(fourier_period(1.0) == doctest::Approx(4 * std::numbers::pi / (6 + std::sqrt(38.0))));
  CHECK(fourier_period(1.0) == doctest::Approx(1.033).epsilon(1e-3));
  CHECK_THROWS_AS(default_scales(3, 1.0), DataError);
}

TEST_CASE("transform is linear and vanishes on zero input") {
  Rng rng = make_stream(1, 0);
  const Eigen::VectorXd x = standard_normal(rng, 100, 1).col(0);
  const Eigen::VectorXd y = standard_normal(rng, 100, 1).col(0);
  const auto scales = default_scales(100, 1.0);
  const ComplexField lhs = morlet_cwt(2.5 * x - 0.7 * y, scales, 1.0);
  const ComplexField rhs = 2.5 * morlet_cwt(x, scales, 1.0) - 0.7 * morlet_cwt(y, scales, 1.0);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * rhs.cwiseAbs().maxCoeff());
  CHECK(morlet_cwt(Eigen::VectorXd::Zero(100), scales, 1.0).cwiseAbs().maxCoeff() == 0.0);
  const CoherenceMap zero = coherence(Eigen::VectorXd::Zero(100), y, scales, 1.0);
  CHECK(zero.r2.maxCoeff() == 0.0);
  CHECK(std::isnan(zero.phase(3, 50)));
}

TEST_CASE("FFT transform matches direct convolution") {
  Rng rng = make_stream(2, 0);
  const Eigen::Index n = 240;
  const Eigen::VectorXd x = ar1(n, 0.6, rng);
  for (double dt : {1.0, 0.25}) {
    std::vector<double> scales;
    for (double s = 6.0 * dt; s <= n * dt / 12.0; s *= std::exp2(0.5)) scales.push_back(s);
    REQUIRE(scales.size() >= 4);
    const ComplexField fft = morlet_cwt(x, scales, dt);
    const ComplexField direct = morlet_cwt_direct(x, scales, dt);
    const double err = (fft - direct).cwiseAbs().maxCoeff() / direct.cwiseAbs().maxCoeff();
    MESSAGE("relative parity error " << err);
    CHECK(err < 1e-6);
  }
}

TEST_CASE("a sinusoid peaks at its period") {
  const Eigen::Index n = 512;
  for (double period : {16.0, 40.0}) {
    Eigen::VectorXd x(n);
    for (Eigen::Index t = 0; t < n; ++t) x(t) = std::sin(2 * std::numbers::pi * t / period);
    const auto scales = default_scales(n, 1.0);
    const ComplexField w = morlet_cwt(x, scales, 1.0);
    Eigen::Index best = 0;
    double top = -1;
    for (Eigen::Index s = 0; s < w.rows(); ++s) {
      const double p = std::norm(w(s, n / 2)) / scales[static_cast<std::size_t>(s)];
      if (p > top) {
        top = p;
        best = s;
      }
    }
    const double found = fourier_period(scales[static_cast<std::size_t>(best)]);
    CHECK(std::abs(found / period - 1.0) < 0.06);
  }
}

TEST_CASE("self coherence and sign flip") {
  Rng rng = make_stream(3, 0);
  const Eigen::VectorXd x = ar1(128, 0.5, rng);
  const auto scales = default_scales(128, 1.0);
  const CoherenceMap self = coherence(x, x, scales, 1.0);
  CHECK(self.r2.minCoeff() >= 0.999);
  CHECK(self.r2.maxCoeff() <= 1.0);
  CHECK(self.phase.cwiseAbs().maxCoeff() < 1e-9);
  const CoherenceMap flip = coherence(x, -x, scales, 1.0);
  CHECK(flip.r2.minCoeff() >= 0.999);
  // +-pi are the same angle
  CHECK((flip.phase.array().cos() + 1.0).abs().maxCoeff() < 1e-12);
  CHECK(flip.phase.array().sin().abs().maxCoeff() < 1e-6);

  const Eigen::VectorXd y = ar1(128, 0.5, rng);
  const CoherenceMap xy = coherence(x, y, scales, 1.0);
  CHECK(xy.r2.minCoeff() >= 0.0);
  CHECK(xy.r2.maxCoeff() <= 1.0);
  CHECK(xy.phase.maxCoeff() <= std::numbers::pi);
  CHECK(xy.phase.minCoeff() > -std::numbers::pi);
  const CoherenceMap yx = coherence(y, x, scales, 1.0);
  CHECK((xy.r2 - yx.r2).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(coherence(x, y.head(100), scales, 1.0), DataError);
}

TEST_CASE("cone of influence") {
  const Eigen::VectorXd c = cone_of_influence(11, 1.0);
  CHECK(c(0) == 0.0);
  CHECK(c(10) == 0.0);
  CHECK(c(5) == doctest::Approx(5.0 / std::sqrt(2.0)));
  for (Eigen::Index t = 0; t < 11; ++t) CHECK(c(t) == c(10 - t));
  const Eigen::VectorXd c4 = cone_of_influence(11, 4.0);
  CHECK((c4 - 4.0 * c).cwiseAbs().maxCoeff() < 1e-12);
  const BoolField m = coi_mask({1.0, 3.0}, c);
  CHECK(m(0, 0));
  CHECK_FALSE(m(0, 5));
  CHECK(m(1, 2));
  CHECK_FALSE(m(1, 5));
}

TEST_CASE("AR(1) surrogates") {
  Rng rng = make_stream(4, 0);
  const Eigen::VectorXd x = 3.0 * ar1(2000, 0.8, rng);
  const Ar1Fit fit = fit_ar1(x);
  CHECK(fit.rho == doctest::Approx(0.8).epsilon(0.05));
  const auto a = ar1_surrogates(x, 20, 9);
  const auto b = ar1_surrogates(x, 20, 9);
  double rho = 0.0, sd = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    const Ar1Fit f = fit_ar1(a[i]);
    rho += f.rho / 20.0;
    sd += f.sd / 20.0;
  }
  CHECK(std::abs(rho - fit.rho) < 0.05);
  CHECK(sd == doctest::Approx(fit.sd).epsilon(0.1));
  CHECK_FALSE(ar1_surrogates(x, 1, 10)[0] == a[0]);
  CHECK_THROWS_AS(fit_ar1(Eigen::VectorXd::Constant(10, 1.0)), DataError);
}

TEST_CASE("Monte Carlo p-values") {
  Rng rng = make_stream(5, 0);
  const Eigen::VectorXd x = ar1(64, 0.5, rng);
  const auto scales = default_scales(64, 1.0);
  SignificanceOptions opts;
  opts.replications = 99;
  opts.seed = 7;
  const CoherenceMap same = coherence_significance(x, x, scales, 1.0, opts);
  int outside = 0;
  for (Eigen::Index s = 0; s < same.pvals.rows(); ++s)
    for (Eigen::Index t = 0; t < same.pvals.cols(); ++t) {
      if (same.in_coi(s, t)) {
        CHECK(std::isnan(same.pvals(s, t)));
      } else {
        ++outside;
        CHECK(same.pvals(s, t) == doctest::Approx(0.01));
      }
    }
  CHECK(outside > 0);

  const Eigen::VectorXd y = ar1(64, 0.5, rng);
  const CoherenceMap m1 = coherence_significance(x, y, scales, 1.0, opts);
  opts.workers = 3;
  const CoherenceMap m2 = coherence_significance(x, y, scales, 1.0, opts);
  CHECK(m1.pvals.cwiseEqual(m2.pvals).count() + m1.in_coi.count() == m1.pvals.size());
  for (Eigen::Index i = 0; i < m1.pvals.size(); ++i) {
    const double p = m1.pvals.data()[i];
    if (std::isnan(p)) continue;
    CHECK(p >= 0.01);
    CHECK(p <= 1.0);
    CHECK(std::abs(p * 100 - std::round(p * 100)) < 1e-9);
  }
}

TEST_CASE("FDR procedures") {
  const auto bh = fdr_bh({0.001, 0.02, 0.9}, 0.05);
  CHECK(bh == std::vector<bool>{true, true, false});
  const auto q = by_qvalues({0.01, 1.0});
  CHECK(q[0] == doctest::Approx(0.03));
  CHECK(q[1] == 1.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto with_nan = fdr_bh({0.001, nan, 0.02, 0.9}, 0.05);
  CHECK(with_nan == std::vector<bool>{true, false, true, false});
  CHECK(std::isnan(by_qvalues({nan, 0.2})[0]));

  Rng rng = make_stream(6, 0);
  std::vector<double> p(200);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : p) v = std::pow(u(rng), 3.0);
  auto prev = fdr_bh(p, 0.01);
  for (double a : {0.05, 0.1, 0.2, 0.5}) {
    const auto cur = fdr_bh(p, a);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK((!prev[i] || cur[i]));
    prev = cur;
  }
  const auto qs = by_qvalues(p);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (p[i] < p[j]) CHECK(qs[i] <= qs[j]);

  Eigen::MatrixXd grid(2, 3);
  grid << 0.001, 0.02, 0.9, 0.5, 0.6, 0.7;
  const BoolField mask = fdr_bh_per_scale(grid, 0.05);
  CHECK(mask(0, 0));
  CHECK(mask(0, 1));
  CHECK_FALSE(mask(0, 2));
  CHECK(mask.row(1).count() == 0);
  CHECK_THROWS_AS(fdr_bh(p, 1.0), ConfigError);
}
