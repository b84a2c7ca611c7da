#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvarx/panel.hpp"
#include "bvarx/random.hpp"

namespace bvarx::testing {

inline std::vector<YearMonth> monthly_dates(Eigen::Index n, YearMonth start = {1995, 1}) {
  std::vector<YearMonth> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(start.plus_months(static_cast<int>(i)));
  return out;
}

inline std::vector<std::string> names(const std::string& prefix, Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

inline Panel make_panel(const Eigen::MatrixXd& endog, const Eigen::MatrixXd& exog) {
  return Panel(monthly_dates(endog.rows()), endog, exog, names("y", endog.cols()), names("x", exog.cols()));
}

struct VarSpec {
  Eigen::VectorXd mu;
  std::vector<Eigen::MatrixXd> phi;
  Eigen::MatrixXd gamma;  // m x k
  Eigen::MatrixXd sigma;
};

// Simulates y_t = mu + sum Phi_l y_{t-l} + Gamma x_t + u_t with AR(1) exog.
// Returns endog (T x m) and fills `exog` (T x k).
inline Eigen::MatrixXd simulate_var(const VarSpec& spec, Eigen::Index rows, Rng& rng, Eigen::MatrixXd& exog,
                                    int burn = 100, double exog_rho = 0.7) {
  const Eigen::Index m = spec.mu.size();
  const Eigen::Index k = spec.gamma.cols();
  const int p = static_cast<int>(spec.phi.size());
  const Eigen::Index total = rows + burn;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(total, m);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(total, k);
  const Eigen::MatrixXd chol = spec.sigma.llt().matrixL();
  for (Eigen::Index t = 0; t < total; ++t) {
    if (k > 0) {
      const Eigen::MatrixXd e = standard_normal(rng, 1, k);
      x.row(t) = e.row(0);
      if (t > 0) x.row(t) += exog_rho * x.row(t - 1);
    }
    Eigen::VectorXd v = spec.mu + chol * standard_normal(rng, m, 1).col(0);
    for (int l = 1; l <= p && t - l >= 0; ++l) v += spec.phi[static_cast<std::size_t>(l - 1)] * y.row(t - l).transpose();
    if (k > 0) v += spec.gamma * x.row(t).transpose();
    y.row(t) = v.transpose();
  }
  exog = x.bottomRows(rows);
  return y.bottomRows(rows);
}

/// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("bvarx_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace bvarx::testing
