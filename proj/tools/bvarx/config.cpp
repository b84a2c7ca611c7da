#include "config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bvarx/errors.hpp"

namespace bvarx::cli {
namespace {

using nlohmann::json;
constexpr const char* kModule = "cli";

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(kModule, msg); }

template <typename T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(std::string("config key '") + key + "' has the wrong type");
  }
}

template <typename T>
std::vector<T> list(const json& j, const char* key, std::vector<T> fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array()) return {get<T>(j, key, T{})};
  std::vector<T> out;
  for (const auto& e : v) {
    try {
      out.push_back(e.get<T>());
    } catch (const json::exception&) {
      fail(std::string("config list '") + key + "' has an element of the wrong type");
    }
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

SzHyper parse_hyper(const json& j) {
  SzHyper h;
  h.p = get(j, "p", h.p);
  h.lambda0 = get(j, "lambda0", h.lambda0);
  h.lambda1 = get(j, "lambda1", h.lambda1);
  h.lambda3 = get(j, "lambda3", h.lambda3);
  h.lambda4 = get(j, "lambda4", h.lambda4);
  h.lambda5 = get(j, "lambda5", h.lambda5);
  h.mu5 = get(j, "mu5", h.mu5);
  h.mu6 = get(j, "mu6", h.mu6);
  h.family = parse_prior_family(get<std::string>(j, "prior_family", "mn_iw"));
  h.validate();
  return h;
}

BoundSpec parse_bound(const json& j) {
  BoundSpec b;
  if (j.is_string()) {
    b.kind = parse_bound_kind(j.get<std::string>());
    if (b.kind == BoundKind::Custom) fail("custom bounds need an object with lower/upper");
    b.bound = Bound::of(b.kind);
    return b;
  }
  if (!j.is_object()) fail("bounds entries must be a kind name or {lower, upper}");
  b.kind = BoundKind::Custom;
  b.bound.lower = get(j, "lower", -std::numeric_limits<double>::infinity());
  b.bound.upper = get(j, "upper", std::numeric_limits<double>::infinity());
  if (!(b.bound.lower < b.bound.upper)) fail("custom bound needs lower < upper");
  return b;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("config root must be an object");

  RunConfig cfg;
  cfg.base_dir = base_dir;
  if (!root.contains("seed")) fail("config must set 'seed'");
  cfg.seed = get<std::uint64_t>(root, "seed", 0);
  cfg.workers = std::max(1u, get<unsigned>(root, "workers", 1));
  cfg.output_dir = resolve(base_dir, get<std::string>(root, "output_dir", "out"));
  cfg.horizon = get(root, "horizon", cfg.horizon);
  if (cfg.horizon < 1) fail("horizon must be a positive integer");
  if (root.contains("train_end")) cfg.train_end = get<Eigen::Index>(root, "train_end", 0);

  if (!root.contains("data")) fail("config must have a 'data' section");
  const json& data = root.at("data");
  for (const auto& f : list<std::string>(data, "files", {})) cfg.data.files.push_back(resolve(base_dir, f));
  if (cfg.data.files.empty()) fail("data.files is empty");
  cfg.data.schema.endogenous = list<std::string>(data, "endogenous", {});
  cfg.data.schema.exogenous = list<std::string>(data, "exogenous", {});
  if (cfg.data.schema.endogenous.empty()) fail("data.endogenous is empty");
  if (data.contains("transforms")) {
    if (!data.at("transforms").is_object()) fail("data.transforms must map column -> op");
    for (const auto& [col, op] : data.at("transforms").items())
      cfg.data.transforms.emplace_back(col, parse_transform(op.get<std::string>()));
  }
  if (data.contains("bounds")) {
    if (!data.at("bounds").is_object()) fail("data.bounds must map column -> bound");
    for (const auto& [col, b] : data.at("bounds").items()) cfg.data.bounds[col] = parse_bound(b);
  }

  if (root.contains("tune")) {
    const json& t = root.at("tune");
    if (t.contains("grid")) {
      const json& g = t.at("grid");
      cfg.grid.p = list<int>(g, "p", cfg.grid.p);
      cfg.grid.lambda0 = list<double>(g, "lambda0", cfg.grid.lambda0);
      cfg.grid.lambda1 = list<double>(g, "lambda1", cfg.grid.lambda1);
      cfg.grid.lambda3 = list<double>(g, "lambda3", cfg.grid.lambda3);
      cfg.grid.lambda4 = list<double>(g, "lambda4", cfg.grid.lambda4);
      cfg.grid.lambda5 = list<double>(g, "lambda5", cfg.grid.lambda5);
      cfg.grid.mu5 = list<double>(g, "mu5", cfg.grid.mu5);
      cfg.grid.mu6 = list<double>(g, "mu6", cfg.grid.mu6);
    }
    cfg.grid.window = get(t, "window", cfg.grid.window);
    for (auto o : list<Eigen::Index>(t, "origins", {})) cfg.grid.origins.push_back(o);
    cfg.tune.reject_unstable = get(t, "reject_unstable", cfg.tune.reject_unstable);
    cfg.tune.realized_exog = get(t, "realized_exog", cfg.tune.realized_exog);
  }
  cfg.grid.horizon = cfg.horizon;
  cfg.tune.workers = cfg.workers;

  if (root.contains("hyper")) cfg.hyper = parse_hyper(root.at("hyper"));
  if (root.contains("winner")) cfg.winner = resolve(base_dir, get<std::string>(root, "winner", ""));

  if (root.contains("fit")) {
    const json& f = root.at("fit");
    cfg.fit.draws = get(f, "draws", cfg.fit.draws);
    cfg.fit.sampler = get(f, "sampler", cfg.fit.sampler);
    cfg.fit.burn = get(f, "burn", cfg.fit.burn);
    if (cfg.fit.sampler != "direct" && cfg.fit.sampler != "gibbs") fail("fit.sampler must be direct or gibbs");
  }

  if (root.contains("forecast")) {
    const json& f = root.at("forecast");
    cfg.forecast.paths = get(f, "paths", cfg.forecast.paths);
    cfg.forecast.gamma = get(f, "gamma", cfg.forecast.gamma);
    cfg.forecast.point = get(f, "point", cfg.forecast.point);
    cfg.forecast.param_draws = get(f, "param_draws", cfg.forecast.param_draws);
    cfg.forecast.min_stable_frac = get(f, "min_stable_frac", cfg.forecast.min_stable_frac);
    cfg.forecast.svg = get(f, "svg", cfg.forecast.svg);
    if (cfg.forecast.paths < 1) fail("forecast.paths must be >= 1");
    if (!(cfg.forecast.gamma > 0.0 && cfg.forecast.gamma < 1.0)) fail("forecast.gamma must lie in (0, 1)");
    if (cfg.forecast.point != "deterministic" && cfg.forecast.point != "posterior_mean")
      fail("forecast.point must be deterministic or posterior_mean");
  }

  if (root.contains("evaluate")) {
    const json& e = root.at("evaluate");
    if (e.contains("models")) {
      for (const auto& m : e.at("models")) {
        ModelFile mf;
        mf.name = get<std::string>(m, "name", "");
        mf.file = resolve(base_dir, get<std::string>(m, "file", ""));
        if (mf.name.empty()) fail("evaluate.models entries need a name");
        cfg.evaluate.models.push_back(std::move(mf));
      }
    }
    cfg.evaluate.metrics.season = get(e, "season", cfg.evaluate.metrics.season);
    cfg.evaluate.metrics.smape_mode = parse_smape_mode(get<std::string>(e, "smape_mode", "fraction"));
    cfg.evaluate.dm_q = get(e, "dm_q", cfg.evaluate.dm_q);
    cfg.evaluate.dm_correction = get(e, "dm_correction", cfg.evaluate.dm_correction);
    const auto pairing = get<std::string>(e, "dm_pairing", "adjacent");
    if (pairing == "adjacent") cfg.evaluate.dm_pairing = DmPairing::Adjacent;
    else if (pairing == "all_vs_first") cfg.evaluate.dm_pairing = DmPairing::AllVsFirst;
    else fail("evaluate.dm_pairing must be adjacent or all_vs_first");
    cfg.evaluate.gw_bandwidth = get<Eigen::Index>(e, "gw_bandwidth", -1);
    cfg.evaluate.mcb_alpha = get(e, "mcb_alpha", cfg.evaluate.mcb_alpha);
    cfg.evaluate.mcb_metric = get(e, "mcb_metric", cfg.evaluate.mcb_metric);
    cfg.evaluate.murphy_alpha = get(e, "murphy_alpha", cfg.evaluate.murphy_alpha);
    cfg.evaluate.murphy_conf = get(e, "murphy_conf", cfg.evaluate.murphy_conf);
    cfg.evaluate.murphy_points = get(e, "murphy_points", cfg.evaluate.murphy_points);
  }

  if (root.contains("irf")) {
    const json& r = root.at("irf");
    cfg.irf.variables = list<std::string>(r, "variables", {});
    cfg.irf.shocks = list<std::string>(r, "shocks", {});
    cfg.irf.switch_variable = get<std::string>(r, "switch", "");
    if (r.contains("p") && r.at("p").is_string()) {
      if (r.at("p").get<std::string>() != "bic") fail("irf.p must be an integer or \"bic\"");
      cfg.irf.p_max = get(r, "p_max", 12);
    } else {
      cfg.irf.lp.p = get(r, "p", cfg.irf.lp.p);
    }
    cfg.irf.lp.shock_lags = get(r, "shock_lags", cfg.irf.lp.shock_lags);
    cfg.irf.lp.gamma = get(r, "gamma", cfg.irf.lp.gamma);
    cfg.irf.lp.horizon = get(r, "horizon", cfg.irf.lp.horizon);
    cfg.irf.lp.trend = parse_trend(get<std::string>(r, "trend", "none"));
    cfg.irf.lp.lag_switching = get(r, "lag_switching", cfg.irf.lp.lag_switching);
    cfg.irf.lp.nonlinear = get(r, "nonlinear", cfg.irf.lp.nonlinear);
    cfg.irf.lp.conf = get(r, "conf", cfg.irf.lp.conf);
    cfg.irf.svg = get(r, "svg", cfg.irf.svg);
    cfg.irf.lp.validate();
  }
  cfg.irf.lp.workers = static_cast<int>(cfg.workers);

  if (root.contains("coherence")) {
    const json& c = root.at("coherence");
    if (c.contains("pairs")) {
      for (const auto& p : c.at("pairs")) {
        if (!p.is_array() || p.size() != 2) fail("coherence.pairs entries must be [x, y]");
        cfg.coherence.pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
      }
    }
    cfg.coherence.replications = get(c, "replications", cfg.coherence.replications);
    cfg.coherence.alpha_fdr = get(c, "alpha_fdr", cfg.coherence.alpha_fdr);
    cfg.coherence.dt = get(c, "dt", cfg.coherence.dt);
    cfg.coherence.dj = get(c, "dj", cfg.coherence.dj);
    cfg.coherence.svg = get(c, "svg", cfg.coherence.svg);
    if (cfg.coherence.replications < 1) fail("coherence.replications must be >= 1");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace bvarx::cli
