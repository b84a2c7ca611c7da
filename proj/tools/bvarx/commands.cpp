#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bvarx/compare.hpp"
#include "bvarx/csv.hpp"
#include "bvarx/errors.hpp"
#include "bvarx/serialize.hpp"
#include "bvarx/svg.hpp"
#include "bvarx/wavelet.hpp"

namespace bvarx::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
constexpr const char* kModule = "cli";

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(DataFault::MissingFile, kModule, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

json hyper_json(const SzHyper& h) { return json::parse(hyper_to_json(h)); }

Eigen::Index train_rows(const RunConfig& cfg, const Panel& panel) {
  const Eigen::Index t = cfg.train_end.value_or(panel.rows());
  if (t < 2 || t > panel.rows())
    throw ConfigError(kModule, "train_end must lie in [2, " + std::to_string(panel.rows()) + "]");
  return t;
}

SzHyper resolve_hyper(const RunConfig& cfg) {
  if (cfg.hyper) return *cfg.hyper;
  if (cfg.winner) {
    if (!fs::exists(*cfg.winner)) throw ConfigError(kModule, "winner file not found: " + cfg.winner->string());
    return hyper_from_json(read_file(*cfg.winner));
  }
  throw ConfigError(kModule, "no hyperparameters: set 'hyper' or point 'winner' at a tune result");
}

SupportBounds support_bounds(const RunConfig& cfg, const Panel& panel) {
  SupportBounds sb = SupportBounds::unbounded(static_cast<std::size_t>(panel.num_endog()));
  for (const auto& [name, spec] : cfg.data.bounds) {
    const auto& names = panel.endog_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ConfigError(kModule, "bounds given for unknown endogenous column '" + name + "'");
    sb.bounds[static_cast<std::size_t>(it - names.begin())] = spec.bound;
  }
  sb.validate();
  return sb;
}

ExogPath exog_path(const Panel& train, int horizon) {
  if (train.num_exog() == 0) return ExogPath{Eigen::MatrixXd(horizon, 0)};
  return future_exog(train, horizon);
}

void write_json(const fs::path& path, const json& j) { csv::write_text(path, j.dump(2) + "\n"); }

json wald_json(const WaldTestResult& r) {
  return {{"statistic", r.statistic},   {"dof", r.dof},
          {"p_value", r.p_value},       {"kernel", to_string(r.kernel)},
          {"lag", r.lag},               {"correction", r.correction},
          {"degenerate", r.degenerate}, {"pseudo_inverse", r.pseudo_inverse}};
}

struct Fitted {
  Panel train;
  SzHyper hyper;
  MniwPosterior post;
  ParamDraw mean;
};

Fitted fit_model(const RunConfig& cfg, const Panel& panel) {
  Fitted f;
  f.train = panel.slice(0, train_rows(cfg, panel));
  f.hyper = resolve_hyper(cfg);
  const MniwPrior prior = build_prior(f.hyper, f.train);
  f.post = posterior_update(prior, build_design(f.train, f.hyper.p));
  f.mean = posterior_mean_params(f.post, f.hyper.p, static_cast<int>(panel.num_exog()));
  return f;
}

std::string fan_svg(const Panel& train, const Eigen::MatrixXd& point, const IntervalTable& table) {
  std::vector<std::string> panels;
  const Eigen::Index hist = std::min<Eigen::Index>(36, train.rows());
  for (Eigen::Index j = 0; j < point.cols(); ++j) {
    svg::Series past{"history", {}, {}, "#444444", false};
    for (Eigen::Index i = 0; i < hist; ++i) {
      past.x.push_back(static_cast<double>(i - hist + 1));
      past.y.push_back(train.endog()(train.rows() - hist + i, j));
    }
    svg::Series pf{"point", {0.0}, {train.endog()(train.rows() - 1, j)}, "#1f4e79", false};
    svg::Band band;
    band.x.push_back(0.0);
    band.lo.push_back(pf.y.front());
    band.hi.push_back(pf.y.front());
    for (Eigen::Index h = 0; h < point.rows(); ++h) {
      const auto& iv = table[static_cast<std::size_t>(j)][static_cast<std::size_t>(h)];
      pf.x.push_back(static_cast<double>(h + 1));
      pf.y.push_back(point(h, j));
      band.x.push_back(static_cast<double>(h + 1));
      band.lo.push_back(iv.lower);
      band.hi.push_back(iv.upper);
    }
    svg::Frame frame{480, 280, train.endog_names()[static_cast<std::size_t>(j)], "months ahead", {}};
    panels.push_back(svg::line_chart(frame, {past, pf}, {band}));
  }
  return svg::grid(panels, 2, 480, 280, "forecast fan charts");
}

}  // namespace

Panel load_data(const RunConfig& cfg) {
  Panel panel = load_panel(cfg.data.files, cfg.data.schema);
  for (const auto& [col, op] : cfg.data.transforms) panel = transform(panel, col, op);
  return panel;
}

void cmd_tune(const RunConfig& cfg) {
  const Panel panel = load_data(cfg);
  const Panel train = panel.slice(0, train_rows(cfg, panel));
  const TuneResult result = grid_search(train, cfg.grid, cfg.tune);

  csv::Writer lb({"rank", "p", "lambda0", "lambda1", "lambda3", "lambda4", "lambda5", "mu5", "mu6", "mrmse", "status"});
  std::size_t rank = 1;
  for (const auto& c : result.leaderboard) {
    const auto& h = c.hyper;
    lb.cell(rank++).cell(h.p).cell(h.lambda0).cell(h.lambda1).cell(h.lambda3).cell(h.lambda4).cell(h.lambda5);
    lb.cell(h.mu5).cell(h.mu6).cell(c.score).cell(c.failure.empty() ? std::string("ok") : "failed: " + c.failure);
    lb.end_row();
  }
  lb.save(cfg.output_dir / "leaderboard.csv");
  const auto origins = cfg.grid.origins.empty() ? default_origins(train.rows(), cfg.horizon, cfg.grid.window)
                                                : cfg.grid.origins;
  write_json(cfg.output_dir / "winner.json", {{"hyper", hyper_json(result.best)},
                                              {"horizon", cfg.horizon},
                                              {"mrmse", result.score},
                                              {"origins", origins.size()},
                                              {"candidates", result.leaderboard.size()}});
}

void cmd_fit(const RunConfig& cfg) {
  const Panel panel = load_data(cfg);
  const Fitted f = fit_model(cfg, panel);
  csv::write_text(cfg.output_dir / "posterior.json", posterior_to_json(f.post));
  json summary{{"hyper", hyper_json(f.hyper)},
               {"train_rows", f.train.rows()},
               {"t_eff", f.post.t_eff},
               {"nu_bar", f.post.nu_bar},
               {"posterior_mean_stable", f.mean.stable},
               {"posterior_mean_spectral_radius", f.mean.spectral_radius}};
  if (cfg.fit.draws > 0) {
    std::vector<ParamDraw> draws;
    if (cfg.fit.sampler == "gibbs") {
      GibbsOptions go;
      go.seed = cfg.seed;
      go.burn = cfg.fit.burn;
      draws = gibbs_sample(build_prior(f.hyper, f.train), build_design(f.train, f.hyper.p), cfg.fit.draws, go);
    } else {
      draws = sample_direct(f.post, f.hyper.p, static_cast<int>(panel.num_exog()), cfg.fit.draws,
                            {cfg.seed, cfg.workers});
    }
    std::size_t stable = 0;
    for (const auto& d : draws) stable += d.stable ? 1 : 0;
    summary["draws"] = draws.size();
    summary["sampler"] = cfg.fit.sampler;
    summary["stable_fraction"] = static_cast<double>(stable) / static_cast<double>(draws.size());
    csv::write_text(cfg.output_dir / "draws.json", draws_to_json(draws));
  }
  write_json(cfg.output_dir / "fit.json", summary);
}

void cmd_forecast(const RunConfig& cfg) {
  const Panel panel = load_data(cfg);
  const Fitted f = fit_model(cfg, panel);
  if (!f.mean.stable)
    throw NumericalError("forecast_engine", "posterior-mean VAR is unstable (spectral radius " +
                                                csv::exact(f.mean.spectral_radius) + ")");
  const int h = cfg.horizon;
  const ExogPath exog = exog_path(f.train, h);
  const Eigen::MatrixXd det = point_forecast(f.mean, f.train, exog, h);
  Eigen::MatrixXd tuned = det;
  json summary{{"hyper", hyper_json(f.hyper)},
               {"spectral_radius", f.mean.spectral_radius},
               {"point", cfg.forecast.point},
               {"paths", cfg.forecast.paths},
               {"gamma", cfg.forecast.gamma}};
  if (cfg.forecast.point == "posterior_mean") {
    const auto draws = sample_direct(f.post, f.hyper.p, static_cast<int>(panel.num_exog()), cfg.forecast.param_draws,
                                     {cfg.seed, cfg.workers});
    MeanForecastOptions mo;
    mo.seed = cfg.seed + 1;
    mo.workers = cfg.workers;
    mo.min_stable_frac = cfg.forecast.min_stable_frac;
    const MeanForecast mf = posterior_mean_forecast(draws, f.train, exog, h, mo);
    tuned = mf.path;
    summary["stable_fraction"] = mf.stable_fraction;
    summary["stable_draws"] = mf.used;
  }
  SimulationOptions so;
  so.seed = cfg.seed + 2;
  so.workers = cfg.workers;
  const DrawCube raw = simulate_paths(f.mean, f.post.sigma_mean(), f.train, exog, h, cfg.forecast.paths, so);
  Eigen::MatrixXd delta;
  const DrawCube cube = snap_center(raw, tuned, det, &delta);
  const IntervalTable table = credible_intervals(cube, support_bounds(cfg, panel), cfg.forecast.gamma, tuned);

  const auto& names = panel.endog_names();
  std::vector<std::string> header{"horizon", "date"};
  header.insert(header.end(), names.begin(), names.end());
  csv::Writer point(header);
  const YearMonth last = f.train.dates().back();
  for (int i = 0; i < h; ++i) {
    point.cell(i + 1).cell(last.plus_months(i + 1).to_string());
    for (Eigen::Index j = 0; j < tuned.cols(); ++j) point.cell(tuned(i, j));
    point.end_row();
  }
  point.save(cfg.output_dir / "point.csv");

  csv::Writer iv({"variable", "horizon", "L", "U", "gamma", "gamma_eff", "rho"});
  for (std::size_t j = 0; j < table.size(); ++j)
    for (std::size_t i = 0; i < table[j].size(); ++i) {
      const Interval& c = table[j][i];
      iv.cell(names[j]).cell(i + 1).cell(c.lower).cell(c.upper).cell(c.gamma).cell(c.gamma_eff).cell(c.rho);
      iv.end_row();
    }
  iv.save(cfg.output_dir / "intervals.csv");

  summary["snap_delta_max_abs"] = delta.size() > 0 ? delta.cwiseAbs().maxCoeff() : 0.0;
  write_json(cfg.output_dir / "forecast.json", summary);
  if (cfg.forecast.svg) csv::write_text(cfg.output_dir / "fan.svg", fan_svg(f.train, tuned, table));
}

void cmd_evaluate(const RunConfig& cfg) {
  const auto& ev = cfg.evaluate;
  if (ev.models.size() < 2) throw ConfigError(kModule, "evaluate needs at least two models");
  const Panel panel = load_data(cfg);
  const int h = cfg.horizon;
  const Eigen::Index t0 = cfg.train_end.value_or(panel.rows() - h);
  if (t0 < 2 || t0 + h > panel.rows())
    throw ConfigError(kModule, "evaluation window [train_end, train_end + horizon) exceeds the panel");
  const Eigen::MatrixXd actual = panel.endog().middleRows(t0, h);
  const Eigen::MatrixXd insample = panel.endog().topRows(t0);
  const auto& names = panel.endog_names();
  const Eigen::Index m = panel.num_endog();

  std::vector<Eigen::MatrixXd> forecasts;
  for (const auto& model : ev.models) {
    const csv::Table t = csv::read(model.file);
    auto col = [&](const std::string& name) -> std::size_t {
      const auto it = std::find(t.header.begin(), t.header.end(), name);
      if (it == t.header.end())
        throw DataError(DataFault::MissingColumn, kModule, model.file.string() + " lacks column '" + name + "'");
      return static_cast<std::size_t>(it - t.header.begin());
    };
    if (static_cast<int>(t.rows.size()) != h)
      throw DataError(DataFault::BadShape, kModule,
                      model.file.string() + " has " + std::to_string(t.rows.size()) + " rows, expected horizon " +
                          std::to_string(h));
    const std::size_t date_col = col("date");
    Eigen::MatrixXd fc(h, m);
    for (int i = 0; i < h; ++i) {
      const auto& row = t.rows[static_cast<std::size_t>(i)];
      const auto date = YearMonth::parse(row.at(date_col));
      if (!date || *date != panel.dates()[static_cast<std::size_t>(t0 + i)])
        throw DataError(DataFault::BadDate, kModule,
                        model.file.string() + " row " + std::to_string(i + 1) + " is misaligned with the evaluation window");
      for (Eigen::Index j = 0; j < m; ++j) {
        const std::string& cell = row.at(col(names[static_cast<std::size_t>(j)]));
        try {
          std::size_t used = 0;
          fc(i, j) = std::stod(cell, &used);
          if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          throw DataError(DataFault::MissingValue, kModule, model.file.string() + ": bad number '" + cell + "'");
        }
      }
    }
    forecasts.push_back(std::move(fc));
  }

  csv::Writer mw({"model", "variable", "horizon", "rmse", "smape", "mase", "theil_u1", "mdape", "smape_dropped",
                  "mdape_dropped"});
  std::vector<std::vector<MetricRow>> reports;
  for (std::size_t k = 0; k < forecasts.size(); ++k) {
    reports.push_back(metric_report(ev.models[k].name, names, actual, forecasts[k], insample, ev.metrics));
    for (const auto& r : reports.back()) {
      mw.cell(r.model).cell(r.variable).cell(r.horizon).cell(r.rmse).cell(r.smape).cell(r.mase).cell(r.theil_u1);
      mw.cell(r.mdape).cell(r.smape_dropped).cell(r.mdape_dropped);
      mw.end_row();
    }
  }
  mw.save(cfg.output_dir / "metrics.csv");

  json tests{{"dm", json::array()}, {"gw", json::array()}};
  csv::Writer murphy({"variable", "model_a", "model_b", "theta", "diff", "variance", "lo", "hi"});
  const auto k = static_cast<Eigen::Index>(forecasts.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    const std::string& var = names[static_cast<std::size_t>(j)];
    const Eigen::VectorXd a = actual.col(j);
    Eigen::MatrixXd losses(h, k);
    for (Eigen::Index q = 0; q < k; ++q)
      losses.col(q) = absolute_scaled_errors(a, forecasts[static_cast<std::size_t>(q)].col(j), insample.col(j),
                                             ev.metrics.season);
    DmOptions dm;
    dm.q = ev.dm_q;
    dm.small_sample_correction = ev.dm_correction;
    dm.pairing = ev.dm_pairing;
    json rec = wald_json(dm_multivariate(losses, dm));
    rec["variable"] = var;
    rec["models"] = json::array();
    for (const auto& model : ev.models) rec["models"].push_back(model.name);
    tests["dm"].push_back(rec);
    for (Eigen::Index q = 1; q < k; ++q) {
      json g = wald_json(gw_unconditional(losses.col(0) - losses.col(q), ev.gw_bandwidth));
      g["variable"] = var;
      g["model_a"] = ev.models[0].name;
      g["model_b"] = ev.models[static_cast<std::size_t>(q)].name;
      tests["gw"].push_back(g);

      const Eigen::VectorXd fa = forecasts[0].col(j);
      const Eigen::VectorXd fb = forecasts[static_cast<std::size_t>(q)].col(j);
      const auto grid = murphy_grid(fa, fb, a, ev.murphy_points);
      const MurphyCurve curve = murphy_diff(fa, fb, a, grid, ev.murphy_alpha, ev.murphy_conf);
      for (std::size_t i = 0; i < curve.thetas.size(); ++i) {
        murphy.cell(var).cell(ev.models[0].name).cell(ev.models[static_cast<std::size_t>(q)].name);
        murphy.cell(curve.thetas[i]).cell(curve.diff[i]).cell(curve.variance[i]).cell(curve.band_lo[i]);
        murphy.cell(curve.band_hi[i]);
        murphy.end_row();
      }
    }
  }
  murphy.save(cfg.output_dir / "murphy.csv");

  if (m >= 2 && k <= 20) {
    Eigen::MatrixXd scores(m, k);
    for (Eigen::Index q = 0; q < k; ++q)
      for (Eigen::Index j = 0; j < m; ++j) {
        const MetricRow& r = reports[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
        const std::string& metric = ev.mcb_metric;
        double v = 0.0;
        if (metric == "rmse") v = r.rmse;
        else if (metric == "smape") v = r.smape;
        else if (metric == "mase") v = r.mase;
        else if (metric == "theil_u1") v = r.theil_u1;
        else if (metric == "mdape") v = r.mdape;
        else throw ConfigError(kModule, "unknown MCB metric '" + metric + "'");
        scores(j, q) = v;
      }
    const McbResult res = mcb(scores, ev.mcb_alpha);
    json ranks = json::object();
    for (Eigen::Index q = 0; q < k; ++q) ranks[ev.models[static_cast<std::size_t>(q)].name] = res.mean_ranks(q);
    tests["mcb"] = {{"metric", ev.mcb_metric}, {"alpha", res.alpha},   {"datasets", m},
                    {"cd", res.cd},            {"q_alpha", res.q_alpha}, {"mean_ranks", ranks},
                    {"best", ev.models[static_cast<std::size_t>(res.best)].name}};
  } else {
    tests["mcb"] = {{"skipped", "needs at least two variables and at most 20 models"}};
  }
  write_json(cfg.output_dir / "tests.json", tests);
}

void cmd_irf(const RunConfig& cfg) {
  const IrfConfig& rc = cfg.irf;
  if (rc.variables.empty() || rc.shocks.empty()) throw ConfigError(kModule, "irf needs variables and shocks");
  if (rc.lp.nonlinear && rc.switch_variable.empty()) throw ConfigError(kModule, "irf.switch is required");
  const Panel panel = load_data(cfg);
  auto column = [&](const std::string& name) {
    if (!panel.find(name)) throw ConfigError(kModule, "irf refers to unknown column '" + name + "'");
    return panel.column(name);
  };
  Eigen::MatrixXd y(panel.rows(), static_cast<Eigen::Index>(rc.variables.size()));
  for (std::size_t i = 0; i < rc.variables.size(); ++i) y.col(static_cast<Eigen::Index>(i)) = column(rc.variables[i]);
  Standardized sw;
  if (rc.lp.nonlinear) sw = standardize_switch(column(rc.switch_variable));
  LpConfig lp = rc.lp;
  if (rc.p_max) lp.p = select_lags_bic(y, *rc.p_max);

  std::vector<std::string> preamble{
      "gamma=" + csv::rounded(lp.gamma), "p=" + std::to_string(lp.p), "shock_lags=" + std::to_string(lp.shock_lags),
      "horizon=" + std::to_string(lp.horizon), "trend=" + std::string(lp.trend == Trend::Linear ? "linear" : "none"),
      "lag_switching=" + std::string(lp.lag_switching ? "true" : "false"),
      "nonlinear=" + std::string(lp.nonlinear ? "true" : "false"), "conf=" + csv::rounded(lp.conf),
      "nw_lag=h+1"};
  if (lp.nonlinear)
    preamble.push_back("switch=" + rc.switch_variable + " mean=" + csv::exact(sw.mean) + " sd=" + csv::exact(sw.sd));

  struct Entry {
    std::string variable, shock;
    std::vector<std::pair<std::string, IrfProfile>> curves;
  };
  std::vector<Entry> entries;
  std::vector<std::string> notes;
  for (const auto& shock_name : rc.shocks) {
    const LpFit fit = fit_nl_lp(y, column(shock_name), sw.values, lp);
    if (fit.regime_collapse)
      notes.push_back("regime_collapse shock=" + shock_name + " min_share=" + csv::exact(fit.min_regime_share));
    for (std::size_t r = 0; r < fit.regimes.size(); ++r)
      if (fit.regime_dropped[r]) notes.push_back("regime_dropped shock=" + shock_name + " regime=" + to_string(fit.regimes[r]));
    for (std::size_t i = 0; i < rc.variables.size(); ++i) {
      Entry e{rc.variables[i], shock_name, {}};
      for (Regime r : fit.regimes) e.curves.emplace_back(to_string(r), extract_irf(fit, static_cast<Eigen::Index>(i), r));
      if (lp.nonlinear) e.curves.emplace_back("average", regime_average_irf(fit, static_cast<Eigen::Index>(i)));
      entries.push_back(std::move(e));
    }
  }
  preamble.insert(preamble.end(), notes.begin(), notes.end());
  csv::Writer w({"variable", "shock", "regime", "horizon", "point", "se", "lo", "hi"}, preamble);
  for (const auto& e : entries)
    for (const auto& [regime, prof] : e.curves)
      for (std::size_t h = 0; h < prof.point.size(); ++h) {
        w.cell(e.variable).cell(e.shock).cell(regime).cell(h).cell(prof.point[h]).cell(prof.se[h]);
        w.cell(prof.lo[h]).cell(prof.hi[h]);
        w.end_row();
      }
  w.save(cfg.output_dir / "irf.csv");

  if (rc.svg) {
    std::vector<std::string> panels;
    const char* colors[] = {"#b2182b", "#2166ac", "#333333"};
    const char* fills[] = {"#f4a582", "#92c5de", "#cccccc"};
    for (const auto& e : entries) {
      std::vector<svg::Series> series;
      std::vector<svg::Band> bands;
      for (std::size_t c = 0; c < e.curves.size() && c < 2; ++c) {
        const auto& [regime, prof] = e.curves[c];
        std::vector<double> xs(prof.point.size());
        for (std::size_t h = 0; h < xs.size(); ++h) xs[h] = static_cast<double>(h);
        series.push_back({regime, xs, prof.point, colors[c], false});
        bands.push_back({xs, prof.lo, prof.hi, fills[c]});
      }
      svg::Frame frame{360, 240, e.variable + " <- " + e.shock, "horizon", {}};
      panels.push_back(svg::line_chart(frame, series, bands));
    }
    csv::write_text(cfg.output_dir / "irf.svg",
                    svg::grid(panels, static_cast<int>(rc.shocks.size()), 360, 240, "local projection responses"));
  }
}

void cmd_coherence(const RunConfig& cfg) {
  const CoherenceConfig& cc = cfg.coherence;
  if (cc.pairs.empty()) throw ConfigError(kModule, "coherence.pairs is empty");
  const Panel panel = load_data(cfg);
  csv::Writer w({"x", "y", "scale", "time", "r2", "phase", "p", "q", "significant", "in_coi"},
                {"replications=" + std::to_string(cc.replications), "alpha_fdr=" + csv::rounded(cc.alpha_fdr),
                 "omega0=6", "dt=" + csv::rounded(cc.dt), "dj=" + csv::rounded(cc.dj)});
  std::vector<std::string> panels;
  for (std::size_t i = 0; i < cc.pairs.size(); ++i) {
    const auto& pair = cc.pairs[i];
    for (const auto& name : {pair.x, pair.y})
      if (!panel.find(name)) throw ConfigError(kModule, "coherence refers to unknown column '" + name + "'");
    const Eigen::VectorXd x = panel.column(pair.x);
    const Eigen::VectorXd y = panel.column(pair.y);
    const auto scales = default_scales(x.size(), cc.dt, cc.dj);
    SignificanceOptions so;
    so.replications = cc.replications;
    so.seed = cfg.seed + i;
    so.workers = cfg.workers;
    so.alpha_fdr = cc.alpha_fdr;
    const CoherenceMap map = coherence_significance(x, y, scales, cc.dt, so, cc.dj);
    for (Eigen::Index s = 0; s < map.r2.rows(); ++s)
      for (Eigen::Index t = 0; t < map.r2.cols(); ++t) {
        w.cell(pair.x).cell(pair.y).cell(map.scales[static_cast<std::size_t>(s)]).cell(static_cast<double>(t) * cc.dt);
        w.cell(map.r2(s, t)).cell(map.phase(s, t)).cell(map.pvals(s, t)).cell(map.qvals(s, t));
        w.cell(map.significant(s, t) ? 1 : 0).cell(map.in_coi(s, t) ? 1 : 0);
        w.end_row();
      }
    svg::Frame frame{640, 320, pair.x + " vs " + pair.y, "time", "period"};
    panels.push_back(svg::heatmap(frame, map.r2, map.periods, &map.phase, &map.significant, &map.in_coi));
  }
  w.save(cfg.output_dir / "coherence.csv");
  if (cc.svg) csv::write_text(cfg.output_dir / "heatmap.svg", svg::grid(panels, 1, 640, 320));
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  auto report = [&](const std::string& code, const std::string& module, const std::string& message, int exit_code) {
    err << json{{"code", code}, {"module", module}, {"message", message}}.dump() << "\n";
    return exit_code;
  };
  CLI::App app{"Sims-Zha BVAR-X forecasting, evaluation, local projections and wavelet coherence"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  struct Sub {
    const char* name;
    const char* help;
    void (*fn)(const RunConfig&);
  };
  const Sub subs[] = {{"tune", "grid search over hyperparameters", cmd_tune},
                      {"fit", "posterior (and optional draws) for one tuple", cmd_fit},
                      {"forecast", "point path, draws and credible intervals", cmd_forecast},
                      {"evaluate", "metrics and forecast comparison tests", cmd_evaluate},
                      {"irf", "regime-switching local projections", cmd_irf},
                      {"coherence", "wavelet coherence with FDR control", cmd_coherence}};
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--config", config_path, "JSON run configuration")->required();
    sc->add_option("--seed", seed, "override the config seed");
    sc->add_option("--out", out_dir, "override the output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return report("config", kModule, e.what(), 2);
  }
  try {
    RunConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    for (const auto& s : subs)
      if (app.got_subcommand(s.name)) s.fn(cfg);
    return 0;
  } catch (const Error& e) {
    return report(e.code(), e.module(), e.what(), e.exit_code());
  } catch (const std::exception& e) {
    return report("numerical", kModule, e.what(), 4);
  }
}

}  // namespace bvarx::cli
