#include "bvarx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvarx/errors.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "metrics";

void check_pair(const Eigen::VectorXd& a, const Eigen::VectorXd& f) {
  if (a.size() == 0) throw DataError(DataFault::BadShape, kModule, "empty input");
  if (a.size() != f.size()) throw DataError(DataFault::BadShape, kModule, "actual and forecast lengths differ");
}

double rms(const Eigen::VectorXd& v) { return std::sqrt(v.squaredNorm() / static_cast<double>(v.size())); }

}  // namespace

SmapeMode parse_smape_mode(const std::string& name) {
  if (name == "fraction") return SmapeMode::Fraction;
  if (name == "percent") return SmapeMode::Percent;
  throw ConfigError(kModule, "unknown SMAPE mode '" + name + "'");
}

double rmse(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast) {
  check_pair(actual, forecast);
  return rms(actual - forecast);
}

double smape(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast, SmapeMode mode, std::size_t* dropped) {
  check_pair(actual, forecast);
  double sum = 0.0;
  std::size_t used = 0, skipped = 0;
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    const double denom = (std::abs(forecast(i)) + std::abs(actual(i))) / 2.0;
    if (denom == 0.0) {
      ++skipped;
      continue;
    }
    sum += std::abs(forecast(i) - actual(i)) / denom;
    ++used;
  }
  if (dropped) *dropped = skipped;
  const double value = used > 0 ? sum / static_cast<double>(used) : 0.0;
  return mode == SmapeMode::Percent ? 100.0 * value : value;
}

double seasonal_naive_mad(const Eigen::VectorXd& insample, int season) {
  if (season < 1) throw ConfigError(kModule, "seasonal period must be >= 1");
  const Eigen::Index d = insample.size();
  if (d <= season)
    throw DataError(DataFault::BadShape, kModule, "in-sample length must exceed the seasonal period");
  const auto diff = insample.tail(d - season) - insample.head(d - season);
  return diff.cwiseAbs().sum() / static_cast<double>(d - season);
}

double mase(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast, const Eigen::VectorXd& insample,
            int season) {
  check_pair(actual, forecast);
  const double scale = seasonal_naive_mad(insample, season);
  if (scale == 0.0) throw NumericalError(kModule, "MASE denominator is zero (in-sample naive forecast is exact)");
  return (actual - forecast).cwiseAbs().mean() / scale;
}

double theil_u1(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast) {
  check_pair(actual, forecast);
  const double denom = rms(actual) + rms(forecast);
  if (denom == 0.0) throw NumericalError(kModule, "Theil U1 undefined when both series are zero");
  return rms(actual - forecast) / denom;
}

double mdape(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast, std::size_t* dropped) {
  check_pair(actual, forecast);
  std::vector<double> ape;
  for (Eigen::Index i = 0; i < actual.size(); ++i)
    if (actual(i) != 0.0) ape.push_back(100.0 * std::abs(actual(i) - forecast(i)) / std::abs(actual(i)));
  if (dropped) *dropped = static_cast<std::size_t>(actual.size()) - ape.size();
  if (ape.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(ape.begin(), ape.end());
  const std::size_t n = ape.size();
  return n % 2 == 1 ? ape[n / 2] : (ape[n / 2 - 1] + ape[n / 2]) / 2.0;
}

std::vector<MetricRow> metric_report(const std::string& model, const std::vector<std::string>& names,
                                     const Eigen::MatrixXd& actual, const Eigen::MatrixXd& forecast,
                                     const Eigen::MatrixXd& insample, const MetricOptions& opts) {
  if (actual.rows() != forecast.rows() || actual.cols() != forecast.cols() || insample.cols() != actual.cols() ||
      static_cast<Eigen::Index>(names.size()) != actual.cols())
    throw DataError(DataFault::BadShape, kModule, "metric inputs disagree in shape");
  std::vector<MetricRow> rows;
  for (Eigen::Index j = 0; j < actual.cols(); ++j) {
    MetricRow r;
    r.model = model;
    r.variable = names[static_cast<std::size_t>(j)];
    r.horizon = static_cast<int>(actual.rows());
    const Eigen::VectorXd a = actual.col(j), f = forecast.col(j);
    r.rmse = rmse(a, f);
    r.smape = smape(a, f, opts.smape_mode, &r.smape_dropped);
    r.mase = mase(a, f, insample.col(j), opts.season);
    r.theil_u1 = theil_u1(a, f);
    r.mdape = mdape(a, f, &r.mdape_dropped);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace bvarx
