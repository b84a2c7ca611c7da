#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvarx/panel.hpp"
#include "bvarx/szbvar.hpp"

namespace bvarx {

/// Candidate values per hyperparameter plus the evaluation design.
struct GridSpec {
  std::vector<int> p{1, 2, 3, 4};
  std::vector<double> lambda0{0.2, 0.4, 0.6, 0.8};
  std::vector<double> lambda1{0.05, 0.1, 0.2};
  std::vector<double> lambda3{1, 2, 3};
  std::vector<double> lambda4{0.1, 0.5};
  std::vector<double> lambda5{0, 0.5, 1};
  std::vector<double> mu5{0, 0.5, 1};
  std::vector<double> mu6{0, 0.5, 1};
  int horizon = 12;
  int window = 24;                     ///< number of trailing origins when `origins` is empty
  std::vector<Eigen::Index> origins;   ///< explicit training lengths t (rows 1..t)
};

struct TuneOptions {
  unsigned workers = 1;
  /// Score +inf when the posterior-mean VAR is not stable at some origin.
  bool reject_unstable = true;
  /// Use the realised exogenous rows t+1..t+h instead of the pinned path.
  bool realized_exog = false;
};

struct CandidateScore {
  SzHyper hyper;
  double score = std::numeric_limits<double>::infinity();
  std::string failure;  ///< empty when the candidate evaluated cleanly
};

struct TuneResult {
  SzHyper best;
  double score = std::numeric_limits<double>::infinity();
  std::vector<CandidateScore> leaderboard;  ///< ascending score, ties by tuple
};

/// sqrt(sum ||e||^2 / (m |T|)).
double mrmse(const std::vector<Eigen::VectorXd>& errors);

/// Training lengths t in [T-h-W+1, T-h], clipped at 1.
std::vector<Eigen::Index> default_origins(Eigen::Index rows, int horizon, int window);

/// Forecast error y_{t+h} - yhat_{t+h|t} at every origin t. Throws on any
/// fitting failure; with `reject_unstable` an unstable posterior mean throws a
/// NumericalError.
std::vector<Eigen::VectorXd> origin_errors(const Panel& panel, const SzHyper& hyper, int horizon,
                                           const std::vector<Eigen::Index>& origins,
                                           const TuneOptions& opts = {});

/// MRMSE of the candidate, +inf on failure (reason in `failure` if given).
double evaluate_candidate(const Panel& panel, const SzHyper& hyper, int horizon,
                          const std::vector<Eigen::Index>& origins, const TuneOptions& opts = {},
                          std::string* failure = nullptr);

/// Cartesian product, sorted and deduplicated.
std::vector<SzHyper> expand_grid(const GridSpec& grid);

TuneResult grid_search(const Panel& panel, const GridSpec& grid, const TuneOptions& opts = {});

}  // namespace bvarx
