#include "bvarx/local_projections.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "bvarx/errors.hpp"
#include "bvarx/parallel.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "local_projections";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Block {
  Regime regime;
  Eigen::Index first = 0;  // first column of the regime block
  Eigen::Index width = 0;
};

}  // namespace

Standardized standardize_switch(const Eigen::VectorXd& z) {
  if (z.size() < 2) throw DataError(DataFault::BadShape, kModule, "switch series needs at least two values");
  Standardized out;
  out.mean = z.mean();
  out.sd = std::sqrt((z.array() - out.mean).square().sum() / static_cast<double>(z.size() - 1));
  if (!(out.sd > 0.0)) throw DataError(DataFault::DegenerateScale, kModule, "switch series is constant");
  out.values = (z.array() - out.mean) / out.sd;
  return out;
}

double logistic(double z, double gamma) {
  const double a = gamma * z;
  if (a > 0.0) {
    const double e = std::exp(-a);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(a));
}

Eigen::VectorXd logistic_transition(const Eigen::VectorXd& z, double gamma) {
  if (!(gamma > 0.0)) throw ConfigError(kModule, "logistic curvature must be > 0");
  Eigen::VectorXd f(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) f(i) = logistic(z(i), gamma);
  return f;
}

int select_lags_bic(const Eigen::MatrixXd& y, int p_max) {
  if (p_max < 1) throw ConfigError(kModule, "p_max must be >= 1");
  const Eigen::Index n = y.cols();
  const Eigen::Index rows = y.rows() - p_max;
  if (rows <= 1 + n * p_max)
    throw DataError(DataFault::BadShape, kModule, "too few observations for BIC lag selection");
  const Eigen::MatrixXd target = y.bottomRows(rows);
  const double dn = static_cast<double>(rows);
  int best = 1;
  double best_bic = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= p_max; ++p) {
    Eigen::MatrixXd x(rows, 1 + n * p);
    x.col(0).setOnes();
    for (int l = 1; l <= p; ++l) x.block(0, 1 + (l - 1) * n, rows, n) = y.middleRows(p_max - l, rows);
    const Eigen::MatrixXd b = x.colPivHouseholderQr().solve(target);
    const Eigen::MatrixXd e = target - x * b;
    const Eigen::MatrixXd sigma = e.transpose() * e / dn;
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) continue;
    const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double bic = logdet + static_cast<double>(n * (1 + n * p)) * std::log(dn) / dn;
    if (bic < best_bic) {
      best_bic = bic;
      best = p;
    }
  }
  if (!std::isfinite(best_bic)) throw NumericalError(kModule, "residual covariance singular for every lag order");
  return best;
}

Trend parse_trend(const std::string& name) {
  if (name == "none" || name == "0") return Trend::None;
  if (name == "linear" || name == "1") return Trend::Linear;
  throw ConfigError(kModule, "unknown trend '" + name + "'");
}

void LpConfig::validate() const {
  if (p < 1) throw ConfigError(kModule, "p must be >= 1");
  if (shock_lags < 0) throw ConfigError(kModule, "shock lags must be >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError(kModule, "gamma must be finite and > 0");
  if (horizon < 0) throw ConfigError(kModule, "horizon must be >= 0");
  if (!(conf > 0.0 && conf < 1.0)) throw ConfigError(kModule, "confidence level must lie in (0, 1)");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::High:
      return "high";
    case Regime::Low:
      return "low";
    case Regime::Linear:
      return "linear";
  }
  return "unknown";
}

LpFit fit_nl_lp(const Eigen::MatrixXd& y, const Eigen::VectorXd& shock, const Eigen::VectorXd& switch_std,
                const LpConfig& config) {
  config.validate();
  const Eigen::Index t_all = y.rows();
  const Eigen::Index n = y.cols();
  if (shock.size() != t_all || (config.nonlinear && switch_std.size() != t_all))
    throw DataError(DataFault::BadShape, kModule, "shock and switch series must align with the panel");
  const Eigen::Index first =
      std::max<Eigen::Index>({config.p, config.shock_lags, config.nonlinear && config.lag_switching ? 1 : 0});

  LpFit fit;
  fit.config = config;
  fit.num_vars = n;
  fit.regimes = config.nonlinear ? std::vector<Regime>{Regime::High, Regime::Low} : std::vector<Regime>{Regime::Linear};

  // Regime weight series indexed by t.
  Eigen::VectorXd f = Eigen::VectorXd::Zero(t_all);
  if (config.nonlinear) {
    const Eigen::VectorXd all = logistic_transition(switch_std, config.gamma);
    for (Eigen::Index t = 0; t < t_all; ++t) f(t) = config.lag_switching ? (t > 0 ? all(t - 1) : kNaN) : all(t);
  }
  auto weight = [&](Regime r, Eigen::Index t) {
    switch (r) {
      case Regime::High:
        return 1.0 - f(t);
      case Regime::Low:
        return f(t);
      case Regime::Linear:
        break;
    }
    return 1.0;
  };

  std::vector<std::string> names{"const"};
  if (config.trend == Trend::Linear) names.push_back("trend");
  std::vector<Block> blocks;
  for (Regime r : fit.regimes) {
    Block b{r, static_cast<Eigen::Index>(names.size()), 0};
    const std::string tag = "_" + to_string(r);
    names.push_back("u" + tag);
    for (int l = 1; l <= config.p; ++l)
      for (Eigen::Index j = 0; j < n; ++j) names.push_back("y" + std::to_string(j) + "_l" + std::to_string(l) + tag);
    for (int l = 1; l <= config.shock_lags; ++l) names.push_back("u_l" + std::to_string(l) + tag);
    b.width = static_cast<Eigen::Index>(names.size()) - b.first;
    blocks.push_back(b);
  }
  const auto d = static_cast<Eigen::Index>(names.size());

  // Regime presence is judged on the horizon-0 sample (the widest one).
  fit.regime_dropped.assign(blocks.size(), false);
  {
    double min_share = 1.0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      double sum = 0.0;
      bool any = false;
      for (Eigen::Index t = first; t < t_all; ++t) {
        const double w = weight(blocks[b].regime, t);
        sum += w;
        any = any || w != 0.0;
      }
      fit.regime_dropped[b] = !any;
      min_share = std::min(min_share, sum / static_cast<double>(t_all - first));
    }
    fit.min_regime_share = min_share;
    fit.regime_collapse = config.nonlinear && min_share < config.collapse_threshold;
  }

  fit.horizons.resize(static_cast<std::size_t>(config.horizon + 1));
  parallel_for(fit.horizons.size(), static_cast<unsigned>(std::max(1, config.workers)), [&](std::size_t hs) {
    const auto h = static_cast<Eigen::Index>(hs);
    const Eigen::Index rows = t_all - h - first;
    LpHorizonFit& out = fit.horizons[hs];
    out.horizon = static_cast<int>(h);
    out.columns = names;
    if (rows <= d)
      throw DataError(DataFault::BadShape, kModule, "too few observations at horizon " + std::to_string(h));
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rows, d);
    Eigen::MatrixXd target(rows, n);
    double sum_f = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::Index t = first + r;
      target.row(r) = y.row(t + h);
      x(r, 0) = 1.0;
      if (config.trend == Trend::Linear) x(r, 1) = static_cast<double>(t);
      for (const Block& b : blocks) {
        const double w = weight(b.regime, t);
        Eigen::Index c = b.first;
        x(r, c++) = shock(t) * w;
        for (int l = 1; l <= config.p; ++l)
          for (Eigen::Index j = 0; j < n; ++j) x(r, c++) = y(t - l, j) * w;
        for (int l = 1; l <= config.shock_lags; ++l) x(r, c++) = shock(t - l) * w;
      }
      sum_f += config.nonlinear ? f(t) : 0.0;
    }
    out.sample = rows;
    out.share_low = config.nonlinear ? sum_f / static_cast<double>(rows) : 0.0;
    out.share_high = config.nonlinear ? 1.0 - out.share_low : 1.0;

    std::vector<Eigen::Index> keep;
    keep.push_back(0);
    if (config.trend == Trend::Linear) keep.push_back(1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (!fit.regime_dropped[b])
        for (Eigen::Index c = 0; c < blocks[b].width; ++c) keep.push_back(blocks[b].first + c);
    const auto dk = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd xk(rows, dk);
    for (Eigen::Index c = 0; c < dk; ++c) xk.col(c) = x.col(keep[static_cast<std::size_t>(c)]);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xk);
    if (qr.rank() < dk)
      throw NumericalError(kModule, "rank-deficient LP design at horizon " + std::to_string(h));
    const Eigen::MatrixXd beta = qr.solve(target);
    const Eigen::MatrixXd resid = target - xk * beta;
    const Eigen::MatrixXd xtx_inv = (xk.transpose() * xk).ldlt().solve(Eigen::MatrixXd::Identity(dk, dk));

    out.nw_lag = std::min<Eigen::Index>(h + 1, rows - 1);
    out.coef = Eigen::MatrixXd::Constant(d, n, kNaN);
    out.covariance.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Constant(d, d, kNaN));
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::MatrixXd g = xk.array().colwise() * resid.col(i).array();
      Eigen::MatrixXd s = g.transpose() * g;
      for (Eigen::Index j = 1; j <= out.nw_lag; ++j) {
        const double w = 1.0 - static_cast<double>(j) / static_cast<double>(out.nw_lag + 1);
        const Eigen::MatrixXd gj = g.bottomRows(rows - j).transpose() * g.topRows(rows - j);
        s += w * (gj + gj.transpose());
      }
      const Eigen::MatrixXd cov = xtx_inv * s * xtx_inv;
      for (Eigen::Index a = 0; a < dk; ++a) {
        out.coef(keep[static_cast<std::size_t>(a)], i) = beta(a, i);
        for (Eigen::Index b = 0; b < dk; ++b)
          out.covariance[static_cast<std::size_t>(i)](keep[static_cast<std::size_t>(a)],
                                                      keep[static_cast<std::size_t>(b)]) = cov(a, b);
      }
    }
  });
  return fit;
}

double band_multiplier(double conf) {
  if (!(conf > 0.0 && conf < 1.0)) throw ConfigError(kModule, "confidence level must lie in (0, 1)");
  if (conf == 0.95) return 1.96;
  return boost::math::quantile(boost::math::normal(), 1.0 - (1.0 - conf) / 2.0);
}

namespace {

Eigen::Index shock_column(const LpFit& fit, Regime regime) {
  for (std::size_t b = 0; b < fit.regimes.size(); ++b)
    if (fit.regimes[b] == regime) {
      const auto& cols = fit.horizons.front().columns;
      const std::string name = "u_" + to_string(regime);
      for (std::size_t c = 0; c < cols.size(); ++c)
        if (cols[c] == name) return static_cast<Eigen::Index>(c);
    }
  throw ConfigError(kModule, "regime '" + to_string(regime) + "' is not part of this fit");
}

void check_variable(const LpFit& fit, Eigen::Index variable) {
  if (variable < 0 || variable >= fit.num_vars)
    throw ConfigError(kModule, "variable index " + std::to_string(variable) + " out of range");
  if (fit.horizons.empty()) throw ConfigError(kModule, "empty LP fit");
}

}  // namespace

IrfProfile extract_irf(const LpFit& fit, Eigen::Index variable, Regime regime) {
  check_variable(fit, variable);
  const Eigen::Index c = shock_column(fit, regime);
  const double z = band_multiplier(fit.config.conf);
  IrfProfile out;
  for (const auto& hf : fit.horizons) {
    const double b = hf.coef(c, variable);
    const double se = std::sqrt(hf.covariance[static_cast<std::size_t>(variable)](c, c));
    out.point.push_back(b);
    out.se.push_back(se);
    out.lo.push_back(b - z * se);
    out.hi.push_back(b + z * se);
  }
  return out;
}

IrfProfile regime_average_irf(const LpFit& fit, Eigen::Index variable) {
  if (!fit.config.nonlinear) return extract_irf(fit, variable, Regime::Linear);
  check_variable(fit, variable);
  const Eigen::Index ch = shock_column(fit, Regime::High);
  const Eigen::Index cl = shock_column(fit, Regime::Low);
  const bool drop_high = fit.regime_dropped[0];
  const bool drop_low = fit.regime_dropped[1];
  const double z = band_multiplier(fit.config.conf);
  IrfProfile out;
  for (const auto& hf : fit.horizons) {
    const auto& cov = hf.covariance[static_cast<std::size_t>(variable)];
    const double wh = drop_high ? 0.0 : hf.share_high;
    const double wl = drop_low ? 0.0 : hf.share_low;
    const double bh = drop_high ? 0.0 : hf.coef(ch, variable);
    const double bl = drop_low ? 0.0 : hf.coef(cl, variable);
    double var = 0.0;
    if (!drop_high) var += wh * wh * cov(ch, ch);
    if (!drop_low) var += wl * wl * cov(cl, cl);
    if (!drop_high && !drop_low) var += 2.0 * wh * wl * cov(ch, cl);
    const double b = (wh * bh + wl * bl) / (wh + wl);
    const double se = std::sqrt(std::max(0.0, var)) / (wh + wl);
    out.point.push_back(b);
    out.se.push_back(se);
    out.lo.push_back(b - z * se);
    out.hi.push_back(b + z * se);
  }
  return out;
}

}  // namespace bvarx
