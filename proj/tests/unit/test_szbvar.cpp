#include <cmath>
#include <complex>

#include <doctest.h>

#include "bvarx/errors.hpp"
#include "bvarx/linalg.hpp"
#include "bvarx/szbvar.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace bvarx;
using bvarx::testing::make_panel;

namespace {

Panel toy_panel(std::uint64_t seed, Eigen::Index rows = 30) {
  bvarx::testing::VarSpec spec;
  spec.mu = Eigen::Vector2d(0.3, -0.2);
  Eigen::Matrix2d phi;
  phi << 0.5, 0.1, -0.2, 0.4;
  spec.phi = {phi};
  spec.gamma = Eigen::Vector2d(0.8, -0.5);
  spec.sigma = Eigen::Matrix2d{{1.0, 0.3}, {0.3, 0.5}};
  Rng rng = make_stream(seed, 0);
  Eigen::MatrixXd x;
  const Eigen::MatrixXd y = bvarx::testing::simulate_var(spec, rows, rng, x);
  return make_panel(y, x);
}

Eigen::MatrixXd random_spd(Rng& rng, Eigen::Index n, double ridge) {
  const Eigen::MatrixXd a = standard_normal(rng, n, n);
  return a * a.transpose() + ridge * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST_CASE("design dimensions") {
  Rng rng = make_stream(1, 0);
  const Panel p = make_panel(standard_normal(rng, 40, 5), standard_normal(rng, 40, 4));
  CHECK(build_design(p, 1).d() == 10);
  CHECK(build_design(p, 1).z.cols() == 10);
  CHECK(build_design(p, 4).z.cols() == 25);
  CHECK(build_design(p, 4).y.rows() == 36);
  CHECK_THROWS_AS(build_design(p, 40), DataError);
}

TEST_CASE("design rows on a hand-enumerable series") {
  Eigen::MatrixXd y(3, 1);
  y << 1, 2, 3;
  const auto d = build_design(make_panel(y, Eigen::MatrixXd(3, 0)), 1);
  Eigen::MatrixXd z(2, 2), yy(2, 1);
  z << 1, 1, 1, 2;
  yy << 2, 3;
  CHECK(d.z == z);
  CHECK(d.y == yy);
}

TEST_CASE("design row layout with lags and exog") {
  Rng rng = make_stream(2, 0);
  const Panel p = make_panel(standard_normal(rng, 12, 2), standard_normal(rng, 12, 1));
  const auto d = build_design(p, 2);
  for (Eigen::Index r = 0; r < d.z.rows(); ++r) {
    const Eigen::Index t = r + 2;
    CHECK(d.z(r, 0) == 1.0);
    CHECK(d.z.block(r, 1, 1, 2) == p.endog().row(t - 1));
    CHECK(d.z.block(r, 3, 1, 2) == p.endog().row(t - 2));
    CHECK(d.z(r, 5) == p.exog()(t, 0));
    CHECK(d.y.row(r) == p.endog().row(t));
  }
}

TEST_CASE("Sims-Zha prior for the Canada 12M tuple") {
  const Panel p = toy_panel(3, 80);
  SzHyper h;  // p=1, l0=0.2, l1=0.05, l3=1, l4=0.1, l5=0, mu5=1, mu6=0
  const MniwPrior prior = build_prior(h, p);
  const Eigen::VectorXd s = ar_residual_scales(p.endog(), 1);
  CHECK(prior.d() == 1 + 2 + 1);
  CHECK(prior.dummy_y.rows() == 2);
  CHECK(prior.dummy_z.rows() == 2);
  CHECK(prior.nu0 == 4.0);
  CHECK(prior.psi0.isApprox(Eigen::MatrixXd(s.array().square().matrix().asDiagonal()), 1e-14));

  const Eigen::VectorXd var = prior.omega0.diagonal();
  CHECK(std::sqrt(var(0)) == doctest::Approx(0.2 * 0.1).epsilon(1e-12));
  CHECK(std::sqrt(var(1)) == doctest::Approx(0.2 * 0.05 / s(0)).epsilon(1e-12));
  CHECK(std::sqrt(var(2)) == doctest::Approx(0.2 * 0.05 / s(1)).epsilon(1e-12));
  CHECK(std::sqrt(var(3)) == doctest::Approx(kPriorStdFloor).epsilon(1e-12));

  Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(4, 2);
  b0(1, 0) = 1.0;
  b0(2, 1) = 1.0;
  CHECK(prior.b0 == b0);

  // Sum-of-coefficients rows carry mu5 * ybar_j on the own lag and response.
  const Eigen::RowVectorXd ybar = p.endog().topRows(1);
  CHECK(prior.dummy_y(0, 0) == doctest::Approx(ybar(0)));
  CHECK(prior.dummy_z(0, 1) == doctest::Approx(ybar(0)));
  CHECK(prior.dummy_z(0, 2) == 0.0);
  CHECK(prior.dummy_z(0, 0) == 0.0);
}

TEST_CASE("lag decay and initial-condition row") {
  const Panel p = toy_panel(4, 80);
  SzHyper h;
  h.p = 3;
  h.lambda0 = 0.4;
  h.lambda1 = 0.2;
  h.lambda3 = 2.0;
  h.lambda5 = 0.5;
  h.mu5 = 0.0;
  h.mu6 = 2.0;
  const MniwPrior prior = build_prior(h, p);
  const Eigen::VectorXd s = ar_residual_scales(p.endog(), 3);
  for (int l = 1; l <= 3; ++l)
    for (int j = 0; j < 2; ++j)
      CHECK(std::sqrt(prior.omega0(1 + (l - 1) * 2 + j, 1 + (l - 1) * 2 + j)) ==
            doctest::Approx(0.4 * 0.2 / (s(j) * std::pow(l, 2.0))).epsilon(1e-12));
  const double sx = std::sqrt((p.exog().array() - p.exog().mean()).square().sum() / (p.rows() - 1.0));
  CHECK(std::sqrt(prior.omega0(7, 7)) == doctest::Approx(0.4 * 0.5 / sx).epsilon(1e-10));
  REQUIRE(prior.dummy_y.rows() == 1);
  CHECK(prior.dummy_z(0, 0) == 2.0);
  const Eigen::RowVectorXd ybar = p.endog().topRows(3).colwise().mean();
  for (int l = 0; l < 3; ++l) CHECK(prior.dummy_z.block(0, 1 + 2 * l, 1, 2).isApprox(2.0 * ybar, 1e-14));
  CHECK(prior.dummy_y.isApprox(2.0 * ybar, 1e-14));
}

TEST_CASE("no dummies gives T_eff = T - p") {
  const Panel p = toy_panel(5);
  SzHyper h;
  h.mu5 = 0.0;
  const auto post = posterior_update(build_prior(h, p), build_design(p, 1));
  CHECK(post.t_eff == 29);
  CHECK(post.nu_bar == doctest::Approx(4.0 + 29.0));
}

TEST_CASE("hyperparameter domain checks") {
  SzHyper h;
  h.p = 0;
  CHECK_THROWS_AS(h.validate(), ConfigError);
  h = SzHyper{};
  h.lambda0 = 0.0;
  CHECK_THROWS_AS(h.validate(), ConfigError);
  h = SzHyper{};
  h.mu5 = -1.0;
  CHECK_THROWS_AS(h.validate(), ConfigError);
  h = SzHyper{};
  h.family = PriorFamily::FlatFlat;
  CHECK_THROWS_AS(build_prior(h, toy_panel(6)), ConfigError);
  CHECK(parse_prior_family("flat_gaussian") == PriorFamily::FlatGaussian);
  CHECK_THROWS_AS(parse_prior_family("laplace"), ConfigError);
}

TEST_CASE("constant series has a degenerate scale") {
  Eigen::MatrixXd y(20, 2);
  y.col(0).setConstant(3.0);
  y.col(1) = Eigen::VectorXd::LinSpaced(20, 0.0, 1.0).array().sin();
  CHECK_THROWS_AS(build_prior(SzHyper{}, make_panel(y, Eigen::MatrixXd(20, 0))), DataError);
}

TEST_CASE("conjugate update matches a dense oracle") {
  const Panel p = toy_panel(7);
  SzHyper h;
  h.lambda0 = 0.5;
  h.lambda1 = 0.3;
  h.lambda5 = 1.0;
  h.mu5 = 1.0;
  h.mu6 = 1.0;
  const MniwPrior prior = build_prior(h, p);
  const auto design = build_design(p, 1);
  const MniwPosterior post = posterior_update(prior, design);

  Eigen::MatrixXd y(design.y.rows() + prior.dummy_y.rows(), 2), z(y.rows(), 4);
  y << design.y, prior.dummy_y;
  z << design.z, prior.dummy_z;
  const auto o = bvarx::testing::oracle_update(prior.b0, prior.omega0, prior.psi0, prior.nu0, y, z);
  CHECK(max_abs(post.b_bar - o.b) < 1e-10);
  CHECK(max_abs(post.omega_bar - o.omega) < 1e-10);
  CHECK(max_abs(post.psi_bar - o.psi) < 1e-10);
  CHECK(post.nu_bar == o.nu);
}

TEST_CASE("zero-data limit returns the prior") {
  Rng rng = make_stream(8, 0);
  const Eigen::MatrixXd b0 = standard_normal(rng, 4, 2);
  const MniwPrior prior = make_prior(b0, random_spd(rng, 4, 1.0), random_spd(rng, 2, 1.0), 5.0);
  DesignMatrices empty{Eigen::MatrixXd(0, 2), Eigen::MatrixXd(0, 4), 2, 1, 1};
  const auto post = posterior_update(prior, empty);
  CHECK(max_abs(post.b_bar - prior.b0) < 1e-12);
  CHECK(max_abs(post.psi_bar - prior.psi0) < 1e-12);
  CHECK(post.nu_bar == prior.nu0);
}

TEST_CASE("three-observation toy matches stacked normal equations") {
  Eigen::MatrixXd y(4, 1);
  y << 0.5, 1.5, 0.9, 1.7;
  const auto design = build_design(make_panel(y, Eigen::MatrixXd(4, 0)), 1);
  Eigen::MatrixXd b0(2, 1);
  b0 << 0.0, 1.0;
  Eigen::MatrixXd omega0 = Eigen::Vector2d(100.0, 25.0).asDiagonal();
  const auto post = posterior_update(make_prior(b0, omega0, Eigen::MatrixXd::Identity(1, 1), 3.0), design);
  // (W0 + Z'Z) b = W0 b0 + Z'y, solved by Cramer's rule.
  const Eigen::MatrixXd& z = design.z;
  const double a11 = 0.01 + z.col(0).squaredNorm(), a12 = z.col(0).dot(z.col(1));
  const double a22 = 0.04 + z.col(1).squaredNorm();
  const double r1 = z.col(0).dot(design.y.col(0)), r2 = 0.04 + z.col(1).dot(design.y.col(0));
  const double det = a11 * a22 - a12 * a12;
  CHECK(post.b_bar(0, 0) == doctest::Approx((r1 * a22 - a12 * r2) / det).epsilon(1e-12));
  CHECK(post.b_bar(1, 0) == doctest::Approx((a11 * r2 - a12 * r1) / det).epsilon(1e-12));
}

TEST_CASE("sequential updating equals the joint update") {
  const Panel p = toy_panel(9, 60);
  Rng rng = make_stream(9, 1);
  const auto design = build_design(p, 1);
  const MniwPrior prior = make_prior(standard_normal(rng, 4, 2), random_spd(rng, 4, 0.5), random_spd(rng, 2, 1.0), 4.0);
  const auto joint = posterior_update(prior, design);

  DesignMatrices first = design, second = design;
  first.y = design.y.topRows(25);
  first.z = design.z.topRows(25);
  second.y = design.y.bottomRows(design.y.rows() - 25);
  second.z = design.z.bottomRows(design.z.rows() - 25);
  const auto seq = posterior_update(posterior_update(prior, first).as_prior(), second);
  CHECK(max_abs(seq.b_bar - joint.b_bar) < 1e-10);
  CHECK(max_abs(seq.psi_bar - joint.psi_bar) < 1e-10);
  CHECK(max_abs(seq.omega_bar - joint.omega_bar) < 1e-10);
  CHECK(seq.nu_bar == joint.nu_bar);
}

TEST_CASE("flat prior reproduces OLS") {
  const Panel p = toy_panel(10, 60);
  SzHyper h;
  h.lambda0 = 1e6;
  h.lambda1 = 0.2;
  h.lambda5 = 1.0;
  h.mu5 = 0.0;
  h.mu6 = 0.0;
  const auto design = build_design(p, 1);
  const auto post = posterior_update(build_prior(h, p), design);
  const Eigen::MatrixXd ols = (design.z.transpose() * design.z).ldlt().solve(design.z.transpose() * design.y);
  CHECK(max_abs(post.b_bar - ols) <= 1e-6 * (1.0 + max_abs(ols)));
}

TEST_CASE("pack and unpack round trip") {
  Rng rng = make_stream(11, 0);
  const Eigen::MatrixXd b = standard_normal(rng, 1 + 3 * 2 + 2, 3);
  const ParamDraw d = unpack_coefficients(b, Eigen::MatrixXd::Identity(3, 3), 3, 2, 2);
  CHECK(d.mu == b.row(0).transpose());
  CHECK(d.phi[1] == b.block(4, 0, 3, 3).transpose());
  CHECK(d.gamma == b.bottomRows(2).transpose());
  CHECK(pack_coefficients(d) == b);
}

TEST_CASE("stability classifier") {
  const auto half = stability(std::vector<Eigen::MatrixXd>{0.5 * Eigen::MatrixXd::Identity(3, 3)});
  CHECK(half.stable);
  CHECK(half.spectral_radius == doctest::Approx(0.5).epsilon(1e-12));

  const auto unit = stability(std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Identity(2, 2)});
  CHECK_FALSE(unit.stable);
  CHECK(unit.spectral_radius == doctest::Approx(1.0).epsilon(1e-12));

  const auto ar2 = stability(std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Constant(1, 1, 0.5), Eigen::MatrixXd::Constant(1, 1, 0.4)});
  const double root = (0.5 + std::sqrt(0.25 + 1.6)) / 2.0;
  CHECK(ar2.spectral_radius == doctest::Approx(root).epsilon(1e-12));
  CHECK(ar2.stable);

  // Just inside the unit circle but within the slack.
  CHECK_FALSE(stability(std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Constant(1, 1, 1.0 - 1e-12)}).stable);
  CHECK_FALSE(stability(std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Constant(1, 1, std::nan(""))}).stable);
}

TEST_CASE("companion matrix layout") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(2, 2, 1.0), b = Eigen::MatrixXd::Constant(2, 2, 2.0);
  const Eigen::MatrixXd c = companion_matrix({a, b});
  CHECK(c.rows() == 4);
  CHECK(c.block(0, 0, 2, 2) == a);
  CHECK(c.block(0, 2, 2, 2) == b);
  CHECK(c.block(2, 0, 2, 2) == Eigen::MatrixXd::Identity(2, 2));
  CHECK(c.block(2, 2, 2, 2).isZero());
}

TEST_CASE("direct sampler") {
  const Panel p = toy_panel(12, 60);
  SzHyper h;
  h.lambda0 = 0.5;
  h.lambda5 = 1.0;
  const auto post = posterior_update(build_prior(h, p), build_design(p, 1));

  SUBCASE("seeded determinism and thread independence") {
    const auto a = sample_direct(post, 1, 1, 200, {42, 1});
    const auto b = sample_direct(post, 1, 1, 200, {42, 4});
    REQUIRE(a.size() == 200);
    for (std::size_t s = 0; s < a.size(); ++s) {
      CHECK(pack_coefficients(a[s]) == pack_coefficients(b[s]));
      CHECK(a[s].sigma == b[s].sigma);
    }
    const auto c = sample_direct(post, 1, 1, 200, {43, 1});
    CHECK(pack_coefficients(a[0]) != pack_coefficients(c[0]));
  }

  SUBCASE("means and Kronecker covariance") {
    const std::size_t n = 20000;
    const auto draws = sample_direct(post, 1, 1, n, {7, 2});
    const Eigen::Index d = post.d(), m = post.m();
    Eigen::MatrixXd mean_b = Eigen::MatrixXd::Zero(d, m), mean_s = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d * m, d * m);
    for (const auto& dr : draws) {
      const Eigen::MatrixXd b = pack_coefficients(dr);
      mean_b += b;
      mean_s += dr.sigma;
      const Eigen::VectorXd v = (b - post.b_bar).reshaped();
      second += v * v.transpose();
    }
    mean_b /= static_cast<double>(n);
    mean_s /= static_cast<double>(n);
    second /= static_cast<double>(n);
    const Eigen::MatrixXd sigma_bar = post.sigma_mean();
    // Cov(vec B) = E[Sigma] (x) Omega_bar.
    Eigen::MatrixXd kron(d * m, d * m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) kron.block(i * d, j * d, d, d) = sigma_bar(i, j) * post.omega_bar;
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < m; ++j) {
        const double se = std::sqrt(kron(j * d + i, j * d + i) / static_cast<double>(n));
        CHECK(std::abs(mean_b(i, j) - post.b_bar(i, j)) < 3.0 * se + 1e-12);
      }
    CHECK((second - kron).norm() / kron.norm() < 0.1);
    CHECK(max_abs(mean_s - sigma_bar) / max_abs(sigma_bar) < 0.05);
  }
}

TEST_CASE("inverse-Wishart mean identity") {
  Rng rng = make_stream(13, 0);
  const Eigen::MatrixXd psi = 3.0 * Eigen::MatrixXd::Identity(3, 3);
  const double nu = 40.0;
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(3, 3);
  const int n = 50000;
  for (int s = 0; s < n; ++s) mean += draw_inverse_wishart(psi, nu, rng);
  mean /= n;
  const Eigen::MatrixXd expected = psi / (nu - 3.0 - 1.0);
  // Var of a diagonal entry: 2 e^2 / (nu - m - 3); allow 4 standard errors.
  const double se = std::sqrt(2.0 * expected(0, 0) * expected(0, 0) / (nu - 6.0) / n);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(mean(i, i) - expected(i, i)) < 4.0 * se);
  CHECK(std::abs(mean(0, 1)) < 4.0 * se);
}

TEST_CASE("Gibbs sampler basics") {
  const Panel p = toy_panel(14, 60);
  const SzHyper h;
  const auto prior = build_prior(h, p);
  const auto design = build_design(p, 1);
  GibbsOptions go;
  go.seed = 5;
  const auto one = gibbs_sample(prior, design, 1, go);
  REQUIRE(one.size() == 1);
  CHECK(one[0].sigma.llt().info() == Eigen::Success);

  go.burn = 20;
  const auto a = gibbs_sample(prior, design, 50, go);
  const auto b = gibbs_sample(prior, design, 50, go);
  for (std::size_t s = 0; s < a.size(); ++s) CHECK(pack_coefficients(a[s]) == pack_coefficients(b[s]));
}
