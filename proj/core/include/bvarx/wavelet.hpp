#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace bvarx {

inline constexpr double kMorletOmega0 = 6.0;

using ComplexField = Eigen::MatrixXcd;  ///< scales x time
using BoolField = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// s_j = s0 2^(j dj), s0 = 2 dt, dj = 1/12, up to N dt / 4.
std::vector<double> default_scales(Eigen::Index n, double dt, double dj = 1.0 / 12.0);

/// Equivalent Fourier period of a Morlet scale.
double fourier_period(double scale, double omega0 = kMorletOmega0);

/// Morlet CWT by FFT with zero padding to 2^(ceil(log2 N) + 1).
ComplexField morlet_cwt(const Eigen::VectorXd& x, const std::vector<double>& scales, double dt);

/// Same transform by direct time-domain convolution (slow; for checking).
ComplexField morlet_cwt_direct(const Eigen::VectorXd& x, const std::vector<double>& scales, double dt);

/// Largest reliable scale at each time: dt min(t, n-1-t) / sqrt(2).
Eigen::VectorXd cone_of_influence(Eigen::Index n, double dt);

/// true where scale exceeds the cone boundary (edge-affected cell).
BoolField coi_mask(const std::vector<double>& scales, const Eigen::VectorXd& coi);

/// Time (Gaussian, sd = s/dt samples) then scale (boxcar of 0.6/dj indices)
/// smoothing of a scales x time field.
ComplexField smooth_field(const ComplexField& field, const std::vector<double>& scales, double dt, double dj);

struct CoherenceMap {
  std::vector<double> scales;
  std::vector<double> periods;
  double dt = 1.0;
  double dj = 1.0 / 12.0;
  Eigen::MatrixXd r2;      ///< in [0, 1]
  Eigen::MatrixXd phase;   ///< (-pi, pi], NaN where a smoothed power is zero
  Eigen::VectorXd coi;
  BoolField in_coi;
  Eigen::MatrixXd pvals;   ///< NaN inside the cone or when not computed
  Eigen::MatrixXd qvals;   ///< pooled BY q-values
  BoolField significant;   ///< per-scale BH mask
  int replications = 0;
  double alpha_fdr = 0.10;
};

/// Smoothed coherence and phase (no significance). Inputs are demeaned.
CoherenceMap coherence(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const std::vector<double>& scales,
                       double dt, double dj = 1.0 / 12.0);

struct Ar1Fit {
  double rho = 0.0;
  double sd = 1.0;        ///< marginal standard deviation
  double mean = 0.0;
};

Ar1Fit fit_ar1(const Eigen::VectorXd& x);

/// `count` AR(1) series matching the lag-1 autocorrelation and variance of x.
std::vector<Eigen::VectorXd> ar1_surrogates(const Eigen::VectorXd& x, std::size_t count, std::uint64_t seed);

struct SignificanceOptions {
  int replications = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double alpha_fdr = 0.10;
};

/// Coherence plus Monte Carlo p-values, BH masks per scale and pooled BY q-values.
CoherenceMap coherence_significance(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                    const std::vector<double>& scales, double dt, const SignificanceOptions& opts,
                                    double dj = 1.0 / 12.0);

/// BH applied separately to each row over its finite entries.
BoolField fdr_bh_per_scale(const Eigen::MatrixXd& pvals, double alpha);
/// BH on one vector of p-values (NaN entries never significant).
std::vector<bool> fdr_bh(const std::vector<double>& pvals, double alpha);

/// Benjamini-Yekutieli q-values pooled over all finite entries.
Eigen::MatrixXd by_pooled_qvalues(const Eigen::MatrixXd& pvals);
std::vector<double> by_qvalues(const std::vector<double>& pvals);

}  // namespace bvarx
