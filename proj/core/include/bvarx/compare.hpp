#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bvarx {

enum class HacKernel { Rectangular, Bartlett, Parzen };
std::string to_string(HacKernel kernel);

/// Kernel weight at lag j for bandwidth `bandwidth`. Rectangular: 1 for
/// j <= bandwidth. Bartlett: 1 - j/(bandwidth+1). Parzen with x = j/bandwidth.
double kernel_weight(HacKernel kernel, Eigen::Index j, Eigen::Index bandwidth);

/// floor(4 (N/100)^(2/9)).
Eigen::Index newey_west_bandwidth(Eigen::Index n);

/// Variance of the sample mean, (1/N)(g0 + 2 sum_j w_j g_j) with Bartlett
/// weights and 1/N autocovariances of the demeaned series.
double newey_west_var(const Eigen::VectorXd& series, Eigen::Index lag);

/// Long-run covariance of the rows of x (T x r): G0 + sum_{j=1..lag} w_j (Gj + Gj').
/// Autocovariances use the demeaned data and a 1/T divisor.
Eigen::MatrixXd hac_covariance(const Eigen::MatrixXd& x, Eigen::Index lag, HacKernel kernel);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

/// Piecewise extremal score for the expectile at level alpha (lower is better).
double extremal_score(double forecast, double actual, double theta, double alpha);

struct MurphyCurve {
  std::vector<double> thetas;
  std::vector<double> diff;
  std::vector<double> variance;
  std::vector<double> band_lo;
  std::vector<double> band_hi;
  double alpha = 0.5;
  double conf = 0.9;
  Eigen::Index lag = 0;
};

/// D(theta) = mean_t [S(fa_t) - S(fb_t)]; negative means A is better.
/// `lag` < 0 selects the automatic bandwidth.
MurphyCurve murphy_diff(const Eigen::VectorXd& fa, const Eigen::VectorXd& fb, const Eigen::VectorXd& actual,
                        const std::vector<double>& thetas, double alpha = 0.5, double conf = 0.9,
                        Eigen::Index lag = -1);

/// Evenly spaced grid spanning [min, max] of all inputs.
std::vector<double> murphy_grid(const Eigen::VectorXd& fa, const Eigen::VectorXd& fb, const Eigen::VectorXd& actual,
                                std::size_t points);

struct WaldTestResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  HacKernel kernel = HacKernel::Rectangular;
  Eigen::Index lag = 0;
  std::string correction;
  bool degenerate = false;       ///< zero-variance differential
  bool pseudo_inverse = false;   ///< singular covariance, pseudo-inverse used
};

enum class DmPairing { Adjacent, AllVsFirst };

struct DmOptions {
  int q = 1;                       ///< block length; HAC lags 0..q-1
  bool small_sample_correction = true;
  DmPairing pairing = DmPairing::Adjacent;
};

/// Multivariate Diebold-Mariano test on a T x k loss matrix.
WaldTestResult dm_multivariate(const Eigen::MatrixXd& losses, const DmOptions& opts = {});

/// Absolute scaled errors |e_t| / in-sample naive MAD.
Eigen::VectorXd absolute_scaled_errors(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast,
                                       const Eigen::VectorXd& insample, int season = 1);

/// Unconditional Giacomini-White test on a T x r matrix of loss differentials.
/// `bandwidth` < 0 selects floor(T^(1/3)).
WaldTestResult gw_unconditional(const Eigen::MatrixXd& loss_diffs, Eigen::Index bandwidth = -1);

/// Studentized-range quantile over sqrt(2) for `algorithms` in 2..20 and
/// alpha in {0.01, 0.05, 0.10}.
double nemenyi_q(int algorithms, double alpha);

/// Ranks 1..n within each row (lower score = rank 1), ties averaged.
Eigen::MatrixXd average_ranks(const Eigen::MatrixXd& scores);

struct McbResult {
  Eigen::MatrixXd ranks;       ///< D x A
  Eigen::VectorXd mean_ranks;  ///< A
  double cd = 0.0;
  double q_alpha = 0.0;
  double alpha = 0.05;
  Eigen::VectorXd lower;       ///< mean rank - cd/2
  Eigen::VectorXd upper;       ///< mean rank + cd/2
  Eigen::Index best = 0;

  bool differ(Eigen::Index i, Eigen::Index j) const { return std::abs(mean_ranks(i) - mean_ranks(j)) > cd; }
};

/// CD = q sqrt(A (A+1) / (6 D)).
double critical_distance(int algorithms, int datasets, double alpha);

McbResult mcb(const Eigen::MatrixXd& scores, double alpha = 0.05);

}  // namespace bvarx
