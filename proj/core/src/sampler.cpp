#include <random>

#include "bvarx/errors.hpp"
#include "bvarx/linalg.hpp"
#include "bvarx/parallel.hpp"
#include "bvarx/szbvar.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "szbvarx_core";

// B = B_bar + K^{-T/2} E L_sigma', where K = L_K L_K' is the posterior precision.
Eigen::MatrixXd draw_matrix_normal(const Eigen::MatrixXd& mean, const Eigen::LLT<Eigen::MatrixXd>& precision,
                                   const Eigen::MatrixXd& sigma, Rng& rng) {
  const Eigen::MatrixXd e = standard_normal(rng, mean.rows(), mean.cols());
  const Eigen::MatrixXd l_sigma = cholesky_or_zero(sigma, kModule, "Sigma draw");
  const Eigen::MatrixXd left = precision.matrixU().solve(e);
  return mean + left * l_sigma.transpose();
}

}  // namespace

Eigen::MatrixXd draw_inverse_wishart(const Eigen::MatrixXd& psi, double nu, Rng& rng) {
  const Eigen::Index m = psi.rows();
  if (psi.cols() != m) throw NumericalError(kModule, "IW scale must be square");
  if (!(nu > static_cast<double>(m) - 1.0)) throw NumericalError(kModule, "IW degrees of freedom too small");
  const Eigen::MatrixXd c = checked_llt(symmetrize(psi), kModule, "IW scale").matrixL();
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    std::chi_squared_distribution<double> chi(nu - static_cast<double>(i));
    a(i, i) = std::sqrt(chi(rng));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = n01(rng);
  }
  // Sigma = C (A A')^{-1} C' = T T' with T = C A^{-T}.
  const Eigen::MatrixXd a_inv = a.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(m, m));
  const Eigen::MatrixXd t = c * a_inv.transpose();
  return symmetrize(t * t.transpose());
}

std::vector<ParamDraw> sample_direct(const MniwPosterior& post, int p, int k, std::size_t draws,
                                     const SamplerOptions& opts) {
  const auto precision = checked_llt(post.omega_bar_precision, kModule, "posterior precision");
  const int m = static_cast<int>(post.m());
  std::vector<ParamDraw> out(draws);
  parallel_for(draws, opts.workers, [&](std::size_t s) {
    Rng rng = make_stream(opts.seed, s);
    Eigen::MatrixXd sigma = draw_inverse_wishart(post.psi_bar, post.nu_bar, rng);
    Eigen::MatrixXd b = draw_matrix_normal(post.b_bar, precision, sigma, rng);
    out[s] = unpack_coefficients(b, sigma, m, p, k);
  });
  return out;
}

std::vector<ParamDraw> gibbs_sample(const MniwPrior& prior, const DesignMatrices& design, std::size_t draws,
                                    const GibbsOptions& opts) {
  const MniwPosterior post = posterior_update(prior, design);
  const auto precision = checked_llt(post.omega_bar_precision, kModule, "posterior precision");
  const Eigen::Index rows = design.y.rows() + prior.dummy_y.rows();
  Eigen::MatrixXd y(rows, prior.m()), z(rows, prior.d());
  y << design.y, prior.dummy_y;
  z << design.z, prior.dummy_z;
  const double d = static_cast<double>(prior.d());
  const double nu = opts.literal_sigma_update ? prior.nu0 + static_cast<double>(rows)
                                              : prior.nu0 + static_cast<double>(rows) + d;

  Rng rng = make_stream(opts.seed, 0);
  Eigen::MatrixXd sigma = post.sigma_mean();
  std::vector<ParamDraw> out;
  out.reserve(draws);
  for (std::size_t it = 0; it < opts.burn + draws; ++it) {
    const Eigen::MatrixXd b = draw_matrix_normal(post.b_bar, precision, sigma, rng);
    const Eigen::MatrixXd resid = y - z * b;
    Eigen::MatrixXd scale = prior.psi0 + resid.transpose() * resid;
    if (!opts.literal_sigma_update) {
      const Eigen::MatrixXd shift = b - prior.b0;
      scale += shift.transpose() * prior.omega0_precision * shift;
    }
    sigma = draw_inverse_wishart(scale, nu, rng);
    if (it >= opts.burn) out.push_back(unpack_coefficients(b, sigma, design.m, design.p, design.k));
  }
  return out;
}

}  // namespace bvarx
