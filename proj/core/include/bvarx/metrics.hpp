#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bvarx {

enum class SmapeMode { Fraction, Percent };
SmapeMode parse_smape_mode(const std::string& name);

double rmse(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast);

/// Mean of |f - a| / ((|f| + |a|) / 2). Terms with a = f = 0 are skipped and
/// counted in `dropped`.
double smape(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast, SmapeMode mode = SmapeMode::Fraction,
             std::size_t* dropped = nullptr);

/// Mean in-sample absolute seasonal difference, (1/(D-S)) sum |y_t - y_{t-S}|.
double seasonal_naive_mad(const Eigen::VectorXd& insample, int season);

/// Mean absolute error over the seasonal-naive in-sample MAD.
double mase(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast, const Eigen::VectorXd& insample,
            int season = 1);

/// RMSE / (rms(actual) + rms(forecast)).
double theil_u1(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast);

/// Median of 100 |a - f| / |a|. Zero actuals are skipped and counted; NaN
/// when nothing is left.
double mdape(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast, std::size_t* dropped = nullptr);

struct MetricRow {
  std::string model;
  std::string variable;
  int horizon = 0;
  double rmse = 0.0;
  double smape = 0.0;
  double mase = 0.0;
  double theil_u1 = 0.0;
  double mdape = 0.0;
  std::size_t smape_dropped = 0;
  std::size_t mdape_dropped = 0;
};

struct MetricOptions {
  int season = 1;
  SmapeMode smape_mode = SmapeMode::Fraction;
};

/// One row per variable. `actual` and `forecast` are H x m, `insample` D x m.
std::vector<MetricRow> metric_report(const std::string& model, const std::vector<std::string>& names,
                                     const Eigen::MatrixXd& actual, const Eigen::MatrixXd& forecast,
                                     const Eigen::MatrixXd& insample, const MetricOptions& opts = {});

}  // namespace bvarx
