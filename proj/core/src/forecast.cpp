#include <cmath>

#include "bvarx/errors.hpp"
#include "bvarx/forecast.hpp"
#include "bvarx/linalg.hpp"
#include "bvarx/parallel.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "forecast_engine";

void check_inputs(const ParamDraw& params, const Eigen::MatrixXd& history, const Eigen::MatrixXd& exog,
                  int horizon) {
  if (horizon < 1) throw ConfigError(kModule, "forecast horizon must be >= 1");
  if (history.cols() != params.m()) throw NumericalError(kModule, "history width does not match m");
  if (history.rows() < params.p())
    throw DataError(DataFault::BadShape, kModule, "history shorter than the lag order");
  if (params.k() > 0 && (exog.rows() != horizon || exog.cols() != params.k()))
    throw DataError(DataFault::BadShape, kModule,
                    "exogenous path has " + std::to_string(exog.rows()) + " rows, expected " +
                        std::to_string(horizon));
}

template <typename Shock>
Eigen::MatrixXd recurse(const ParamDraw& params, const Eigen::MatrixXd& history, const Eigen::MatrixXd& exog,
                        int horizon, Shock&& shock) {
  const int m = params.m();
  const int p = params.p();
  // Rows 0..p-1 hold the initial conditions, oldest first.
  Eigen::MatrixXd buf(p + horizon, m);
  buf.topRows(p) = history.bottomRows(p);
  for (int h = 0; h < horizon; ++h) {
    Eigen::VectorXd y = params.mu;
    for (int l = 1; l <= p; ++l) y += params.phi[static_cast<std::size_t>(l - 1)] * buf.row(p + h - l).transpose();
    if (params.k() > 0) y += params.gamma * exog.row(h).transpose();
    shock(y);
    buf.row(p + h) = y.transpose();
  }
  return buf.bottomRows(horizon);
}

}  // namespace

Eigen::MatrixXd point_forecast(const ParamDraw& params, const Eigen::MatrixXd& history,
                               const Eigen::MatrixXd& exog, int horizon) {
  check_inputs(params, history, exog, horizon);
  return recurse(params, history, exog, horizon, [](Eigen::VectorXd&) {});
}

Eigen::MatrixXd point_forecast(const ParamDraw& params, const Panel& train, const ExogPath& exog, int horizon) {
  return point_forecast(params, train.endog(), exog.values, horizon);
}

Eigen::MatrixXd stochastic_path(const ParamDraw& params, const Eigen::MatrixXd& sigma,
                                const Eigen::MatrixXd& history, const Eigen::MatrixXd& exog, int horizon,
                                Rng& rng) {
  check_inputs(params, history, exog, horizon);
  const Eigen::MatrixXd chol = cholesky_or_zero(sigma, kModule, "shock covariance");
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::VectorXd e(params.m());
  return recurse(params, history, exog, horizon, [&](Eigen::VectorXd& y) {
    for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = n01(rng);
    y += chol * e;
  });
}

MeanForecast posterior_mean_forecast(const std::vector<ParamDraw>& draws, const Panel& train,
                                     const ExogPath& exog, int horizon, const MeanForecastOptions& opts) {
  if (draws.empty()) throw NumericalError(kModule, "no parameter draws to average");
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < draws.size(); ++s)
    if (draws[s].stable) keep.push_back(s);
  MeanForecast out;
  out.stable_fraction = static_cast<double>(keep.size()) / static_cast<double>(draws.size());
  if (keep.empty() || out.stable_fraction < opts.min_stable_frac)
    throw NumericalError(kModule, "only " + std::to_string(keep.size()) + " of " + std::to_string(draws.size()) +
                                      " draws are stable (fraction " + std::to_string(out.stable_fraction) +
                                      ", minimum " + std::to_string(opts.min_stable_frac) + ")");
  std::vector<Eigen::MatrixXd> paths(keep.size());
  parallel_for(keep.size(), opts.workers, [&](std::size_t i) {
    const std::size_t s = keep[i];
    Rng rng = make_stream(opts.seed, s);
    paths[i] = stochastic_path(draws[s], draws[s].sigma, train.endog(), exog.values, horizon, rng);
  });
  out.path = Eigen::MatrixXd::Zero(horizon, draws.front().m());
  for (const auto& path : paths) out.path += path;
  out.path /= static_cast<double>(paths.size());
  out.used = paths.size();
  return out;
}

DrawCube simulate_paths(const ParamDraw& mean_params, const Eigen::MatrixXd& sigma_bar, const Panel& train,
                        const ExogPath& exog, int horizon, std::size_t paths, const SimulationOptions& opts) {
  if (paths == 0) throw ConfigError(kModule, "number of simulated paths must be >= 1");
  cholesky_or_zero(sigma_bar, kModule, "Sigma_bar");
  DrawCube cube(paths);
  parallel_for(paths, opts.workers, [&](std::size_t s) {
    Rng rng = make_stream(opts.seed, s);
    cube[s] = stochastic_path(mean_params, sigma_bar, train.endog(), exog.values, horizon, rng);
  });
  return cube;
}

DrawCube snap_center(const DrawCube& cube, const Eigen::MatrixXd& tuned, const Eigen::MatrixXd& deterministic,
                     Eigen::MatrixXd* delta_out) {
  if (tuned.rows() != deterministic.rows() || tuned.cols() != deterministic.cols())
    throw NumericalError(kModule, "snap-centering paths differ in shape");
  const Eigen::MatrixXd delta = tuned - deterministic;
  DrawCube out;
  out.reserve(cube.size());
  for (const auto& draw : cube) {
    if (draw.rows() != delta.rows() || draw.cols() != delta.cols())
      throw NumericalError(kModule, "draw shape does not match the point forecast");
    out.push_back(draw + delta);
  }
  if (delta_out) *delta_out = delta;
  return out;
}

}  // namespace bvarx
