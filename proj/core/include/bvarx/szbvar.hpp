#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvarx/panel.hpp"
#include "bvarx/random.hpp"

namespace bvarx {

enum class PriorFamily { MnIw, FlatGaussian, FlatFlat };

std::string to_string(PriorFamily f);
PriorFamily parse_prior_family(const std::string& name);

/// Sims-Zha hyperparameter tuple.
struct SzHyper {
  int p = 1;               ///< lag order
  double lambda0 = 0.2;    ///< overall tightness
  double lambda1 = 0.05;   ///< own/cross lag tightness
  double lambda3 = 1.0;    ///< lag decay exponent
  double lambda4 = 0.1;    ///< intercept tightness
  double lambda5 = 0.0;    ///< exogenous tightness
  double mu5 = 1.0;        ///< sum-of-coefficients dummy weight
  double mu6 = 0.0;        ///< initial-conditions dummy weight
  PriorFamily family = PriorFamily::MnIw;

  /// Throws ConfigError when any field is out of its domain.
  void validate() const;
  /// Lexicographic order over (p, l0, l1, l3, l4, l5, mu5, mu6).
  bool operator<(const SzHyper& other) const;
  bool operator==(const SzHyper& other) const;
  std::string describe() const;
};

/// Prior standard deviations are floored here so that zero tightness stays a
/// finite (very large) precision.
inline constexpr double kPriorStdFloor = 1e-8;

/// Stacked regression Y = Z B + U. Z rows are [1, y_{t-1}', ..., y_{t-p}', x_t'].
struct DesignMatrices {
  Eigen::MatrixXd y;  ///< T_eff x m
  Eigen::MatrixXd z;  ///< T_eff x d
  int m = 0;
  int p = 0;
  int k = 0;
  int d() const { return 1 + m * p + k; }
};

DesignMatrices build_design(const Panel& train, int p);

/// Matrix-normal / inverse-Wishart prior. `omega0` is the full column
/// covariance of B (overall tightness already folded in) and `omega0_precision`
/// its inverse; both are kept because a diagonal prior may carry precisions
/// near 1e16 that we do not want to round-trip through an inversion.
struct MniwPrior {
  Eigen::MatrixXd b0;                ///< d x m
  Eigen::MatrixXd omega0;            ///< d x d SPD
  Eigen::MatrixXd omega0_precision;  ///< d x d SPD
  Eigen::MatrixXd psi0;              ///< m x m SPD
  double nu0 = 0.0;
  Eigen::MatrixXd dummy_y;           ///< rows x m (possibly 0 rows)
  Eigen::MatrixXd dummy_z;           ///< rows x d
  Eigen::VectorXd scales;            ///< s_j of the endogenous series (diagnostic)

  Eigen::Index d() const { return b0.rows(); }
  Eigen::Index m() const { return b0.cols(); }
};

/// Univariate AR(p) residual standard deviation (intercept included,
/// dof-adjusted) of each column.
Eigen::VectorXd ar_residual_scales(const Eigen::MatrixXd& series, int p);

MniwPrior build_prior(const SzHyper& hyper, const Panel& train);

/// Prior from explicit blocks (no dummies). Precision is derived from omega0.
MniwPrior make_prior(Eigen::MatrixXd b0, Eigen::MatrixXd omega0, Eigen::MatrixXd psi0, double nu0);

struct MniwPosterior {
  Eigen::MatrixXd b_bar;              ///< d x m
  Eigen::MatrixXd omega_bar;          ///< d x d covariance
  Eigen::MatrixXd omega_bar_precision;///< d x d, (lambda0^2 Omega0)^-1 + Z'Z
  Eigen::MatrixXd psi_bar;            ///< m x m
  double nu_bar = 0.0;
  Eigen::Index t_eff = 0;             ///< rows used (data + dummies)
  // Cached cross-products of the stacked (data + dummy) design.
  Eigen::MatrixXd ztz;
  Eigen::MatrixXd zty;
  Eigen::MatrixXd yty;

  Eigen::Index d() const { return b_bar.rows(); }
  Eigen::Index m() const { return b_bar.cols(); }
  /// E[Sigma] = Psi / (nu - m - 1).
  Eigen::MatrixXd sigma_mean() const;
  /// Reuse the posterior as the prior for a further update.
  MniwPrior as_prior() const;
};

/// Appends the prior's dummy rows to `design` and applies the conjugate update.
MniwPosterior posterior_update(const MniwPrior& prior, const DesignMatrices& design);

/// One set of VAR parameters with the stability classification attached.
struct ParamDraw {
  Eigen::VectorXd mu;                ///< m
  std::vector<Eigen::MatrixXd> phi;  ///< p blocks, m x m
  Eigen::MatrixXd gamma;             ///< m x k
  Eigen::MatrixXd sigma;             ///< m x m
  bool stable = false;
  double spectral_radius = 0.0;

  int m() const { return static_cast<int>(mu.size()); }
  int p() const { return static_cast<int>(phi.size()); }
  int k() const { return static_cast<int>(gamma.cols()); }
};

/// Splits a d x m coefficient matrix into (mu, Phi_1..Phi_p, Gamma) and
/// classifies stability.
ParamDraw unpack_coefficients(const Eigen::MatrixXd& b, const Eigen::MatrixXd& sigma, int m, int p, int k);
/// Inverse of unpack_coefficients.
Eigen::MatrixXd pack_coefficients(const ParamDraw& draw);

/// Posterior-mean parameters: B = B_bar, Sigma = E[Sigma].
ParamDraw posterior_mean_params(const MniwPosterior& post, int p, int k);

/// Strict-inequality slack for |rho| < 1.
inline constexpr double kStabilityEps = 1e-9;

struct StabilityResult {
  bool stable = false;
  double spectral_radius = 0.0;
};

Eigen::MatrixXd companion_matrix(const std::vector<Eigen::MatrixXd>& phi);
StabilityResult stability(const std::vector<Eigen::MatrixXd>& phi);
inline StabilityResult stability(const ParamDraw& draw) { return stability(draw.phi); }

/// Sigma ~ IW(psi, nu).
Eigen::MatrixXd draw_inverse_wishart(const Eigen::MatrixXd& psi, double nu, Rng& rng);

struct SamplerOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// i.i.d. draws: Sigma ~ IW(Psi_bar, nu_bar), then B ~ MN(B_bar, Omega_bar, Sigma).
std::vector<ParamDraw> sample_direct(const MniwPosterior& post, int p, int k, std::size_t draws,
                                     const SamplerOptions& opts);

struct GibbsOptions {
  std::uint64_t seed = 0;
  std::size_t burn = 0;
  /// Use the literal Sigma update IW(Psi0 + SSR(B), nu0 + T) instead of the
  /// exact full conditional. The literal form does not target the same
  /// posterior; it exists for comparison only.
  bool literal_sigma_update = false;
};

/// Two-block Gibbs chain started at Sigma = E[Sigma | data].
std::vector<ParamDraw> gibbs_sample(const MniwPrior& prior, const DesignMatrices& design,
                                    std::size_t draws, const GibbsOptions& opts);

}  // namespace bvarx
