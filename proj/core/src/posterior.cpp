#include "bvarx/errors.hpp"
#include "bvarx/linalg.hpp"
#include "bvarx/szbvar.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "szbvarx_core";

}  // namespace

Eigen::MatrixXd MniwPosterior::sigma_mean() const {
  const double denom = nu_bar - static_cast<double>(m()) - 1.0;
  if (!(denom > 0.0)) throw NumericalError(kModule, "posterior mean of Sigma undefined (nu_bar <= m + 1)");
  return psi_bar / denom;
}

MniwPrior MniwPosterior::as_prior() const {
  MniwPrior prior;
  prior.b0 = b_bar;
  prior.omega0 = omega_bar;
  prior.omega0_precision = omega_bar_precision;
  prior.psi0 = psi_bar;
  prior.nu0 = nu_bar;
  prior.dummy_y.resize(0, m());
  prior.dummy_z.resize(0, d());
  return prior;
}

MniwPosterior posterior_update(const MniwPrior& prior, const DesignMatrices& design) {
  const Eigen::Index d = prior.d();
  const Eigen::Index m = prior.m();
  if (design.z.cols() != d || design.y.cols() != m || design.z.rows() != design.y.rows() ||
      prior.dummy_z.cols() != d || prior.dummy_y.cols() != m)
    throw NumericalError(kModule, "prior and design dimensions disagree");

  const Eigen::Index rows = design.y.rows() + prior.dummy_y.rows();
  Eigen::MatrixXd y(rows, m), z(rows, d);
  y << design.y, prior.dummy_y;
  z << design.z, prior.dummy_z;

  MniwPosterior post;
  post.t_eff = rows;
  post.ztz = z.transpose() * z;
  post.zty = z.transpose() * y;
  post.yty = y.transpose() * y;

  const Eigen::MatrixXd& precision0 = prior.omega0_precision;
  post.omega_bar_precision = symmetrize(precision0 + post.ztz);
  auto llt = checked_llt(post.omega_bar_precision, kModule, "posterior precision");
  post.b_bar = llt.solve(precision0 * prior.b0 + post.zty);
  post.omega_bar = symmetrize(llt.solve(Eigen::MatrixXd::Identity(d, d)));

  const Eigen::MatrixXd resid = y - z * post.b_bar;
  const Eigen::MatrixXd shift = post.b_bar - prior.b0;
  post.psi_bar = symmetrize(prior.psi0 + resid.transpose() * resid +
                            shift.transpose() * precision0 * shift);
  checked_llt(post.psi_bar, kModule, "posterior scale Psi_bar");
  post.nu_bar = prior.nu0 + static_cast<double>(rows);
  return post;
}

ParamDraw unpack_coefficients(const Eigen::MatrixXd& b, const Eigen::MatrixXd& sigma, int m, int p, int k) {
  if (b.rows() != 1 + m * p + k || b.cols() != m)
    throw NumericalError(kModule, "coefficient matrix has the wrong shape");
  ParamDraw draw;
  draw.mu = b.row(0).transpose();
  draw.phi.reserve(static_cast<std::size_t>(p));
  for (int l = 0; l < p; ++l) draw.phi.emplace_back(b.block(1 + l * m, 0, m, m).transpose());
  draw.gamma = b.bottomRows(k).transpose();
  draw.sigma = sigma;
  const auto st = stability(draw.phi);
  draw.stable = st.stable;
  draw.spectral_radius = st.spectral_radius;
  return draw;
}

Eigen::MatrixXd pack_coefficients(const ParamDraw& draw) {
  const int m = draw.m(), p = draw.p(), k = draw.k();
  Eigen::MatrixXd b(1 + m * p + k, m);
  b.row(0) = draw.mu.transpose();
  for (int l = 0; l < p; ++l) b.block(1 + l * m, 0, m, m) = draw.phi[static_cast<std::size_t>(l)].transpose();
  if (k > 0) b.bottomRows(k) = draw.gamma.transpose();
  return b;
}

ParamDraw posterior_mean_params(const MniwPosterior& post, int p, int k) {
  return unpack_coefficients(post.b_bar, post.sigma_mean(), static_cast<int>(post.m()), p, k);
}

}  // namespace bvarx
