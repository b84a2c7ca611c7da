#include <cmath>
#include <sstream>
#include <tuple>

#include "bvarx/csv.hpp"
#include "bvarx/errors.hpp"
#include "bvarx/linalg.hpp"
#include "bvarx/szbvar.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "szbvarx_core";

}  // namespace

std::string to_string(PriorFamily f) {
  switch (f) {
    case PriorFamily::MnIw:
      return "mn_iw";
    case PriorFamily::FlatGaussian:
      return "flat_gaussian";
    case PriorFamily::FlatFlat:
      return "flat_flat";
  }
  return "unknown";
}

PriorFamily parse_prior_family(const std::string& name) {
  if (name == "mn_iw") return PriorFamily::MnIw;
  if (name == "flat_gaussian") return PriorFamily::FlatGaussian;
  if (name == "flat_flat") return PriorFamily::FlatFlat;
  throw ConfigError(kModule, "unknown prior family '" + name + "'");
}

void SzHyper::validate() const {
  auto bad = [](const std::string& what) { throw ConfigError(kModule, "invalid hyperparameter: " + what); };
  if (p < 1) bad("p must be >= 1");
  for (double v : {lambda0, lambda1, lambda3, lambda4, lambda5, mu5, mu6})
    if (!std::isfinite(v)) bad("non-finite value");
  if (!(lambda0 > 0.0)) bad("lambda0 must be > 0");
  if (lambda1 < 0 || lambda3 < 0 || lambda4 < 0 || lambda5 < 0 || mu5 < 0 || mu6 < 0)
    bad("tightness and dummy weights must be >= 0");
}

bool SzHyper::operator<(const SzHyper& o) const {
  auto key = [](const SzHyper& h) {
    return std::tuple{h.p, h.lambda0, h.lambda1, h.lambda3, h.lambda4, h.lambda5, h.mu5, h.mu6,
                      static_cast<int>(h.family)};
  };
  return key(*this) < key(o);
}

bool SzHyper::operator==(const SzHyper& o) const { return !(*this < o) && !(o < *this); }

std::string SzHyper::describe() const {
  std::ostringstream out;
  out << "p=" << p << " lambda0=" << csv::rounded(lambda0) << " lambda1=" << csv::rounded(lambda1)
      << " lambda3=" << csv::rounded(lambda3) << " lambda4=" << csv::rounded(lambda4)
      << " lambda5=" << csv::rounded(lambda5) << " mu5=" << csv::rounded(mu5)
      << " mu6=" << csv::rounded(mu6) << " prior=" << to_string(family);
  return out.str();
}

DesignMatrices build_design(const Panel& train, int p) {
  if (p < 1) throw ConfigError(kModule, "lag order must be >= 1");
  const Eigen::Index t = train.rows();
  if (p >= t)
    throw DataError(DataFault::BadShape, kModule,
                    "lag order " + std::to_string(p) + " needs more than " + std::to_string(t) + " rows");
  DesignMatrices dm;
  dm.m = static_cast<int>(train.num_endog());
  dm.k = static_cast<int>(train.num_exog());
  dm.p = p;
  const Eigen::Index rows = t - p;
  dm.y = train.endog().bottomRows(rows);
  dm.z.resize(rows, dm.d());
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index tt = r + p;
    dm.z(r, 0) = 1.0;
    for (int l = 1; l <= p; ++l)
      dm.z.block(r, 1 + (l - 1) * dm.m, 1, dm.m) = train.endog().row(tt - l);
    if (dm.k > 0) dm.z.block(r, 1 + dm.m * p, 1, dm.k) = train.exog().row(tt);
  }
  return dm;
}

Eigen::VectorXd ar_residual_scales(const Eigen::MatrixXd& series, int p) {
  const Eigen::Index t = series.rows();
  const Eigen::Index n = t - p;
  if (n <= p + 1)
    throw DataError(DataFault::BadShape, kModule, "too few observations for AR(" + std::to_string(p) + ") scale estimates");
  Eigen::VectorXd out(series.cols());
  for (Eigen::Index j = 0; j < series.cols(); ++j) {
    Eigen::MatrixXd x(n, p + 1);
    Eigen::VectorXd y = series.col(j).tail(n);
    x.col(0).setOnes();
    for (int l = 1; l <= p; ++l) x.col(l) = series.col(j).segment(p - l, n);
    // Rank-deficient AR design (e.g. a constant series) means no usable scale.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    Eigen::VectorXd resid = y;
    if (qr.rank() == x.cols()) resid = y - x * qr.solve(y);
    else resid.setZero();
    out(j) = std::sqrt(resid.squaredNorm() / static_cast<double>(n - p - 1));
  }
  return out;
}

MniwPrior make_prior(Eigen::MatrixXd b0, Eigen::MatrixXd omega0, Eigen::MatrixXd psi0, double nu0) {
  MniwPrior prior;
  if (omega0.rows() != b0.rows() || omega0.cols() != b0.rows() || psi0.rows() != b0.cols() ||
      psi0.cols() != b0.cols())
    throw NumericalError(kModule, "prior block dimensions disagree");
  if (!(nu0 > static_cast<double>(b0.cols()) + 1.0))
    throw NumericalError(kModule, "prior degrees of freedom must exceed m + 1");
  prior.omega0_precision = spd_inverse(omega0, kModule);
  checked_llt(psi0, kModule, "prior scale Psi0");
  prior.b0 = std::move(b0);
  prior.omega0 = std::move(omega0);
  prior.psi0 = std::move(psi0);
  prior.nu0 = nu0;
  prior.dummy_y.resize(0, prior.b0.cols());
  prior.dummy_z.resize(0, prior.b0.rows());
  return prior;
}

MniwPrior build_prior(const SzHyper& hyper, const Panel& train) {
  hyper.validate();
  if (hyper.family != PriorFamily::MnIw)
    throw ConfigError(kModule, "prior family '" + to_string(hyper.family) + "' is not implemented");
  const int m = static_cast<int>(train.num_endog());
  const int k = static_cast<int>(train.num_exog());
  const int p = hyper.p;
  const int d = 1 + m * p + k;
  if (train.rows() <= p)
    throw DataError(DataFault::BadShape, kModule, "training sample shorter than lag order");

  const Eigen::VectorXd s = ar_residual_scales(train.endog(), p);
  for (int j = 0; j < m; ++j) {
    const auto col = train.endog().col(j);
    const double sd = std::sqrt((col.array() - col.mean()).square().mean());
    if (!(s(j) > 1e-10 * std::max(1.0, sd)))
      throw DataError(DataFault::DegenerateScale, kModule,
                      "degenerate AR scale for '" + train.endog_names()[static_cast<std::size_t>(j)] + "'");
  }
  Eigen::VectorXd sx(k);
  for (int q = 0; q < k; ++q) {
    const auto col = train.exog().col(q);
    const double sd = train.rows() > 1
                          ? std::sqrt((col.array() - col.mean()).square().sum() / static_cast<double>(train.rows() - 1))
                          : 0.0;
    sx(q) = sd > 0.0 ? sd : 1.0;
  }

  auto var_of = [](double sd) {
    const double v = std::max(sd, kPriorStdFloor);
    return v * v;
  };
  Eigen::VectorXd var(d);
  var(0) = var_of(hyper.lambda0 * hyper.lambda4);
  for (int l = 1; l <= p; ++l)
    for (int j = 0; j < m; ++j)
      var(1 + (l - 1) * m + j) =
          var_of(hyper.lambda0 * hyper.lambda1 / (s(j) * std::pow(static_cast<double>(l), hyper.lambda3)));
  for (int q = 0; q < k; ++q) var(1 + m * p + q) = var_of(hyper.lambda0 * hyper.lambda5 / sx(q));

  Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(d, m);
  for (int j = 0; j < m; ++j) b0(1 + j, j) = 1.0;

  const double nu0 = m + 2.0;
  Eigen::MatrixXd psi0 = Eigen::MatrixXd(s.array().square().matrix().asDiagonal()) * (nu0 - m - 1.0);

  MniwPrior prior = make_prior(std::move(b0), Eigen::MatrixXd(var.asDiagonal()), std::move(psi0), nu0);
  prior.scales = s;

  const Eigen::VectorXd ybar = train.endog().topRows(p).colwise().mean().transpose();
  const int n_dummy = (hyper.mu5 > 0.0 ? m : 0) + (hyper.mu6 > 0.0 ? 1 : 0);
  prior.dummy_y = Eigen::MatrixXd::Zero(n_dummy, m);
  prior.dummy_z = Eigen::MatrixXd::Zero(n_dummy, d);
  int row = 0;
  if (hyper.mu5 > 0.0) {
    for (int j = 0; j < m; ++j, ++row) {
      const double v = hyper.mu5 * ybar(j);
      prior.dummy_y(row, j) = v;
      for (int l = 0; l < p; ++l) prior.dummy_z(row, 1 + l * m + j) = v;
    }
  }
  if (hyper.mu6 > 0.0) {
    prior.dummy_y.row(row) = hyper.mu6 * ybar.transpose();
    prior.dummy_z(row, 0) = hyper.mu6;
    for (int l = 0; l < p; ++l) prior.dummy_z.block(row, 1 + l * m, 1, m) = hyper.mu6 * ybar.transpose();
  }
  return prior;
}

}  // namespace bvarx
