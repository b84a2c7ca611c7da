#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bvarx {

struct Standardized {
  Eigen::VectorXd values;
  double mean = 0.0;
  double sd = 1.0;  ///< sample (n-1) standard deviation
};

Standardized standardize_switch(const Eigen::VectorXd& z);

/// F(z) = 1 / (1 + exp(gamma z)), evaluated without overflow.
double logistic(double z, double gamma);
Eigen::VectorXd logistic_transition(const Eigen::VectorXd& z, double gamma);

/// BIC-minimising lag order of a linear VAR with intercept on a common sample.
int select_lags_bic(const Eigen::MatrixXd& y, int p_max);

enum class Trend { None, Linear };
Trend parse_trend(const std::string& name);

struct LpConfig {
  int p = 6;                  ///< endogenous lags
  int shock_lags = 4;         ///< lags of the shock kept as controls
  double gamma = 3.0;
  int horizon = 24;
  Trend trend = Trend::None;
  bool lag_switching = true;  ///< weights use z_{t-1}
  bool nonlinear = true;      ///< false fits a single-regime LP
  double conf = 0.95;
  double collapse_threshold = 0.05;
  int workers = 1;

  void validate() const;
};

/// "high" carries weight 1 - F (high switch variable), "low" carries F.
enum class Regime { High, Low, Linear };
std::string to_string(Regime r);

struct LpHorizonFit {
  int horizon = 0;
  Eigen::Index sample = 0;
  std::vector<std::string> columns;
  Eigen::MatrixXd coef;                     ///< columns x n; NaN rows for dropped regimes
  std::vector<Eigen::MatrixXd> covariance;  ///< per equation, columns x columns
  Eigen::Index nw_lag = 0;
  double share_high = 0.0;                  ///< sample mean of 1 - F
  double share_low = 0.0;                   ///< sample mean of F
};

struct LpFit {
  LpConfig config;
  std::vector<LpHorizonFit> horizons;
  std::vector<Regime> regimes;
  std::vector<bool> regime_dropped;  ///< parallel to `regimes`
  bool regime_collapse = false;
  double min_regime_share = 1.0;
  Eigen::Index num_vars = 0;
};

/// Horizon-wise regressions of y_{t+h} on u_t, lags of y and u interacted with
/// regime weights F(z). `switch_std` must already be standardized.
LpFit fit_nl_lp(const Eigen::MatrixXd& y, const Eigen::VectorXd& shock, const Eigen::VectorXd& switch_std,
                const LpConfig& config);

struct IrfProfile {
  std::vector<double> point;
  std::vector<double> se;
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Band multiplier: exactly 1.96 at 95%, otherwise the normal quantile.
double band_multiplier(double conf);

/// Response of variable i to the shock in one regime.
IrfProfile extract_irf(const LpFit& fit, Eigen::Index variable, Regime regime);

/// Sample-share weighted average of the two regime responses.
IrfProfile regime_average_irf(const LpFit& fit, Eigen::Index variable);

}  // namespace bvarx
