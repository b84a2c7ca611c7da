#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bvarx/compare.hpp"
#include "bvarx/forecast.hpp"
#include "bvarx/local_projections.hpp"
#include "bvarx/metrics.hpp"
#include "bvarx/panel.hpp"
#include "bvarx/szbvar.hpp"
#include "bvarx/tuner.hpp"

namespace bvarx::cli {

struct BoundSpec {
  BoundKind kind = BoundKind::Unbounded;
  Bound bound;
};

struct DataConfig {
  std::vector<std::filesystem::path> files;
  Schema schema;
  std::vector<std::pair<std::string, TransformOp>> transforms;
  std::map<std::string, BoundSpec> bounds;
};

struct ForecastConfig {
  std::size_t paths = 1000;
  double gamma = 0.5;
  /// "deterministic" or "posterior_mean" (stability-filtered draw average).
  std::string point = "deterministic";
  std::size_t param_draws = 1000;
  double min_stable_frac = 0.5;
  bool svg = true;
};

struct FitConfig {
  std::size_t draws = 0;
  std::string sampler = "direct";  ///< "direct" or "gibbs"
  std::size_t burn = 500;
};

struct ModelFile {
  std::string name;
  std::filesystem::path file;
};

struct EvaluateConfig {
  std::vector<ModelFile> models;
  MetricOptions metrics;
  int dm_q = 1;
  bool dm_correction = true;
  DmPairing dm_pairing = DmPairing::Adjacent;
  Eigen::Index gw_bandwidth = -1;
  double mcb_alpha = 0.05;
  std::string mcb_metric = "rmse";
  double murphy_alpha = 0.5;
  double murphy_conf = 0.9;
  std::size_t murphy_points = 101;
};

struct IrfConfig {
  std::vector<std::string> variables;
  std::vector<std::string> shocks;
  std::string switch_variable;
  std::optional<int> p_max;  ///< when set, p is chosen by BIC up to this order
  LpConfig lp;
  bool svg = true;
};

struct CoherencePair {
  std::string x;
  std::string y;
};

struct CoherenceConfig {
  std::vector<CoherencePair> pairs;
  int replications = 1000;
  double alpha_fdr = 0.10;
  double dt = 1.0;
  double dj = 1.0 / 12.0;
  bool svg = true;
};

struct RunConfig {
  std::filesystem::path base_dir;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  DataConfig data;
  int horizon = 12;
  std::optional<Eigen::Index> train_end;
  GridSpec grid;
  TuneOptions tune;
  std::optional<SzHyper> hyper;
  std::optional<std::filesystem::path> winner;
  FitConfig fit;
  ForecastConfig forecast;
  EvaluateConfig evaluate;
  IrfConfig irf;
  CoherenceConfig coherence;
};

/// Parses the JSON run configuration. Relative paths resolve against the
/// directory containing the config file. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

}  // namespace bvarx::cli
