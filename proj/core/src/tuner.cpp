#include <algorithm>
#include <cmath>

#include "bvarx/errors.hpp"
#include "bvarx/forecast.hpp"
#include "bvarx/parallel.hpp"
#include "bvarx/tuner.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "tuner";

}  // namespace

double mrmse(const std::vector<Eigen::VectorXd>& errors) {
  if (errors.empty()) throw NumericalError(kModule, "MRMSE needs at least one origin");
  const Eigen::Index m = errors.front().size();
  if (m == 0) throw NumericalError(kModule, "MRMSE needs at least one variable");
  double total = 0.0;
  for (const auto& e : errors) {
    if (e.size() != m) throw NumericalError(kModule, "error vectors differ in length");
    total += e.squaredNorm();
  }
  return std::sqrt(total / (static_cast<double>(m) * static_cast<double>(errors.size())));
}

std::vector<Eigen::Index> default_origins(Eigen::Index rows, int horizon, int window) {
  if (horizon < 1) throw ConfigError(kModule, "horizon must be >= 1");
  if (window < 1) throw ConfigError(kModule, "origin window must be >= 1");
  const Eigen::Index last = rows - horizon;
  if (last < 1) throw ConfigError(kModule, "panel too short for horizon " + std::to_string(horizon));
  std::vector<Eigen::Index> out;
  for (Eigen::Index t = std::max<Eigen::Index>(1, last - window + 1); t <= last; ++t) out.push_back(t);
  return out;
}

std::vector<Eigen::VectorXd> origin_errors(const Panel& panel, const SzHyper& hyper, int horizon,
                                           const std::vector<Eigen::Index>& origins, const TuneOptions& opts) {
  if (origins.empty()) throw ConfigError(kModule, "empty origin set");
  std::vector<Eigen::VectorXd> errors;
  errors.reserve(origins.size());
  for (Eigen::Index t : origins) {
    if (t < hyper.p + 1 || t + horizon > panel.rows())
      throw ConfigError(kModule, "infeasible origin t=" + std::to_string(t) + " for p=" + std::to_string(hyper.p) +
                                     ", h=" + std::to_string(horizon));
    const Panel train = panel.slice(0, t);
    const MniwPrior prior = build_prior(hyper, train);
    const MniwPosterior post = posterior_update(prior, build_design(train, hyper.p));
    const ParamDraw params = posterior_mean_params(post, hyper.p, static_cast<int>(panel.num_exog()));
    if (opts.reject_unstable && !params.stable)
      throw NumericalError(kModule, "posterior mean is unstable at origin t=" + std::to_string(t) +
                                        " (spectral radius " + std::to_string(params.spectral_radius) + ")");
    ExogPath exog;
    if (panel.num_exog() > 0)
      exog = opts.realized_exog ? ExogPath{panel.exog().middleRows(t, horizon)} : future_exog(train, horizon);
    const Eigen::MatrixXd path = point_forecast(params, train, exog, horizon);
    errors.emplace_back(panel.endog().row(t + horizon - 1).transpose() - path.row(horizon - 1).transpose());
  }
  return errors;
}

double evaluate_candidate(const Panel& panel, const SzHyper& hyper, int horizon,
                          const std::vector<Eigen::Index>& origins, const TuneOptions& opts, std::string* failure) {
  if (origins.empty()) throw ConfigError(kModule, "empty origin set");
  try {
    const double score = mrmse(origin_errors(panel, hyper, horizon, origins, opts));
    if (std::isfinite(score)) return score;
    if (failure) *failure = "non-finite MRMSE";
  } catch (const Error& e) {
    if (failure) *failure = e.what();
  }
  return std::numeric_limits<double>::infinity();
}

std::vector<SzHyper> expand_grid(const GridSpec& grid) {
  std::vector<SzHyper> out;
  for (int p : grid.p)
    for (double l0 : grid.lambda0)
      for (double l1 : grid.lambda1)
        for (double l3 : grid.lambda3)
          for (double l4 : grid.lambda4)
            for (double l5 : grid.lambda5)
              for (double m5 : grid.mu5)
                for (double m6 : grid.mu6) {
                  SzHyper h;
                  h.p = p;
                  h.lambda0 = l0;
                  h.lambda1 = l1;
                  h.lambda3 = l3;
                  h.lambda4 = l4;
                  h.lambda5 = l5;
                  h.mu5 = m5;
                  h.mu6 = m6;
                  h.validate();
                  out.push_back(h);
                }
  if (out.empty()) throw ConfigError(kModule, "hyperparameter grid is empty");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TuneResult grid_search(const Panel& panel, const GridSpec& grid, const TuneOptions& opts) {
  const std::vector<SzHyper> candidates = expand_grid(grid);
  const std::vector<Eigen::Index> origins =
      grid.origins.empty() ? default_origins(panel.rows(), grid.horizon, grid.window) : grid.origins;
  std::vector<CandidateScore> scores(candidates.size());
  parallel_for(candidates.size(), opts.workers, [&](std::size_t i) {
    scores[i].hyper = candidates[i];
    scores[i].score = evaluate_candidate(panel, candidates[i], grid.horizon, origins, opts, &scores[i].failure);
  });
  std::stable_sort(scores.begin(), scores.end(), [](const CandidateScore& a, const CandidateScore& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.hyper < b.hyper;
  });
  if (!std::isfinite(scores.front().score))
    throw NumericalError(kModule, "every candidate failed; first failure: " + scores.front().failure);
  TuneResult result;
  result.best = scores.front().hyper;
  result.score = scores.front().score;
  result.leaderboard = std::move(scores);
  return result;
}

}  // namespace bvarx
