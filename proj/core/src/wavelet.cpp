#include "bvarx/wavelet.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "bvarx/errors.hpp"
#include "bvarx/parallel.hpp"
#include "bvarx/random.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "wavelet_coherence";
constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Forward/backward complex transforms of one length with owned buffers.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!buf_) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }

  std::size_t size() const { return n_; }
  cd* data() { return reinterpret_cast<cd*>(buf_); }
  void forward() { fftw_execute(fwd_); }
  /// Unnormalised inverse.
  void backward() { fftw_execute(bwd_); }

 private:
  std::size_t n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

std::size_t padded_length(Eigen::Index n) {
  std::size_t p = 1;
  while (p < static_cast<std::size_t>(n)) p <<= 1;
  return p << 1;
}

// Angular frequency of FFT bin k (in radians per sample).
double bin_frequency(std::size_t k, std::size_t n) {
  const double kk = k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
  return 2.0 * kPi * kk / static_cast<double>(n);
}

void check_scales(const std::vector<double>& scales) {
  if (scales.empty()) throw ConfigError(kModule, "empty scale vector");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw ConfigError(kModule, "scales must be positive");
    if (i > 0 && !(scales[i] > scales[i - 1])) throw ConfigError(kModule, "scales must be increasing");
  }
}

Eigen::VectorXd ar1_path(const Ar1Fit& fit, Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double innov = fit.sd * std::sqrt(1.0 - fit.rho * fit.rho);
  Eigen::VectorXd out(n);
  double prev = fit.sd * n01(rng);
  out(0) = prev;
  for (Eigen::Index t = 1; t < n; ++t) {
    prev = fit.rho * prev + innov * n01(rng);
    out(t) = prev;
  }
  return out.array() + fit.mean;
}

struct Fields {
  Eigen::MatrixXd r2;
  Eigen::MatrixXd phase;
};

Fields coherence_fields(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const std::vector<double>& scales,
                        double dt, double dj) {
  const Eigen::VectorXd xc = x.array() - x.mean();
  const Eigen::VectorXd yc = y.array() - y.mean();
  const ComplexField wx = morlet_cwt(xc, scales, dt);
  const ComplexField wy = morlet_cwt(yc, scales, dt);
  const auto ns = static_cast<Eigen::Index>(scales.size());
  ComplexField px(ns, x.size()), py(ns, x.size()), pxy(ns, x.size());
  for (Eigen::Index s = 0; s < ns; ++s) {
    const double inv = 1.0 / scales[static_cast<std::size_t>(s)];
    for (Eigen::Index t = 0; t < x.size(); ++t) {
      px(s, t) = std::norm(wx(s, t)) * inv;
      py(s, t) = std::norm(wy(s, t)) * inv;
      pxy(s, t) = wx(s, t) * std::conj(wy(s, t)) * inv;
    }
  }
  const ComplexField sx = smooth_field(px, scales, dt, dj);
  const ComplexField sy = smooth_field(py, scales, dt, dj);
  const ComplexField sxy = smooth_field(pxy, scales, dt, dj);
  Fields f;
  f.r2.resize(ns, x.size());
  f.phase.resize(ns, x.size());
  for (Eigen::Index s = 0; s < ns; ++s) {
    for (Eigen::Index t = 0; t < x.size(); ++t) {
      const double a = sx(s, t).real();
      const double b = sy(s, t).real();
      if (a > 0.0 && b > 0.0) {
        f.r2(s, t) = std::min(1.0, std::norm(sxy(s, t)) / (a * b));
        double ph = std::arg(sxy(s, t));
        if (ph == -kPi) ph = kPi;
        f.phase(s, t) = ph;
      } else {
        f.r2(s, t) = 0.0;
        f.phase(s, t) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return f;
}

}  // namespace

std::vector<double> default_scales(Eigen::Index n, double dt, double dj) {
  if (n < 4) throw DataError(DataFault::BadShape, kModule, "series needs at least 4 points");
  if (!(dt > 0.0) || !(dj > 0.0)) throw ConfigError(kModule, "dt and dj must be positive");
  const double s0 = 2.0 * dt;
  const int j_max = static_cast<int>(std::floor(std::log2(static_cast<double>(n) * dt / 4.0 / s0) / dj));
  std::vector<double> scales;
  for (int j = 0; j <= std::max(0, j_max); ++j) scales.push_back(s0 * std::exp2(j * dj));
  return scales;
}

double fourier_period(double scale, double omega0) {
  return 4.0 * kPi * scale / (omega0 + std::sqrt(2.0 + omega0 * omega0));
}

ComplexField morlet_cwt(const Eigen::VectorXd& x, const std::vector<double>& scales, double dt) {
  check_scales(scales);
  if (x.size() < 4) throw DataError(DataFault::BadShape, kModule, "series needs at least 4 points");
  const Eigen::Index n = x.size();
  const std::size_t np = padded_length(n);
  Fft series(np), work(np);
  cd* xs = series.data();
  for (std::size_t i = 0; i < np; ++i) xs[i] = i < static_cast<std::size_t>(n) ? cd(x(static_cast<Eigen::Index>(i)), 0.0) : cd(0.0);
  series.forward();
  const double norm0 = std::pow(kPi, -0.25);
  ComplexField out(static_cast<Eigen::Index>(scales.size()), n);
  cd* w = work.data();
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const double s = scales[si] / dt;  // scale in samples
    const double amp = std::sqrt(2.0 * kPi * s) * norm0 / static_cast<double>(np);
    for (std::size_t k = 0; k < np; ++k) {
      const double om = bin_frequency(k, np);
      if (om > 0.0) {
        const double arg = s * om - kMorletOmega0;
        w[k] = xs[k] * (amp * std::exp(-0.5 * arg * arg));
      } else {
        w[k] = 0.0;
      }
    }
    work.backward();
    for (Eigen::Index t = 0; t < n; ++t) out(static_cast<Eigen::Index>(si), t) = w[t];
  }
  return out;
}

ComplexField morlet_cwt_direct(const Eigen::VectorXd& x, const std::vector<double>& scales, double dt) {
  check_scales(scales);
  const Eigen::Index n = x.size();
  const double norm0 = std::pow(kPi, -0.25);
  ComplexField out(static_cast<Eigen::Index>(scales.size()), n);
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const double s = scales[si] / dt;
    const double amp = norm0 / std::sqrt(s);
    for (Eigen::Index t = 0; t < n; ++t) {
      cd acc = 0.0;
      for (Eigen::Index u = 0; u < n; ++u) {
        const double eta = static_cast<double>(u - t) / s;
        acc += x(u) * std::exp(-0.5 * eta * eta) * cd(std::cos(kMorletOmega0 * eta), -std::sin(kMorletOmega0 * eta));
      }
      out(static_cast<Eigen::Index>(si), t) = amp * acc;
    }
  }
  return out;
}

Eigen::VectorXd cone_of_influence(Eigen::Index n, double dt) {
  if (n < 2) throw DataError(DataFault::BadShape, kModule, "cone of influence needs n >= 2");
  Eigen::VectorXd c(n);
  for (Eigen::Index t = 0; t < n; ++t)
    c(t) = dt * static_cast<double>(std::min(t, n - 1 - t)) / std::numbers::sqrt2;
  return c;
}

BoolField coi_mask(const std::vector<double>& scales, const Eigen::VectorXd& coi) {
  BoolField m(static_cast<Eigen::Index>(scales.size()), coi.size());
  for (std::size_t s = 0; s < scales.size(); ++s)
    for (Eigen::Index t = 0; t < coi.size(); ++t) m(static_cast<Eigen::Index>(s), t) = scales[s] > coi(t);
  return m;
}

ComplexField smooth_field(const ComplexField& field, const std::vector<double>& scales, double dt, double dj) {
  const Eigen::Index ns = field.rows();
  const Eigen::Index n = field.cols();
  if (static_cast<Eigen::Index>(scales.size()) != ns) throw ConfigError(kModule, "scale count mismatch");
  const std::size_t np = padded_length(n);
  Fft fft(np);
  cd* b = fft.data();
  ComplexField timed(ns, n);
  for (Eigen::Index s = 0; s < ns; ++s) {
    for (std::size_t i = 0; i < np; ++i) b[i] = i < static_cast<std::size_t>(n) ? field(s, static_cast<Eigen::Index>(i)) : cd(0.0);
    fft.forward();
    const double sigma = scales[static_cast<std::size_t>(s)] / dt;
    for (std::size_t k = 0; k < np; ++k) {
      const double om = bin_frequency(k, np);
      b[k] *= std::exp(-0.5 * sigma * sigma * om * om) / static_cast<double>(np);
    }
    fft.backward();
    for (Eigen::Index t = 0; t < n; ++t) timed(s, t) = b[t];
  }

  // Boxcar over 0.6/dj scale indices; fractional weight at both ends.
  const double width = 0.6 / dj;
  std::vector<double> kernel{1.0};
  if (width > 1.0) {
    const int half = static_cast<int>(std::floor(width / 2.0 - 0.5));
    const int full = 2 * half + 1;
    const double rem = (width - full) / 2.0;
    kernel.assign(static_cast<std::size_t>(full + 2), 1.0);
    kernel.front() = rem;
    kernel.back() = rem;
  }
  const int reach = static_cast<int>(kernel.size() / 2);
  ComplexField out(ns, n);
  for (Eigen::Index s = 0; s < ns; ++s) {
    double wsum = 0.0;
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(n);
    for (int o = -reach; o <= reach; ++o) {
      const Eigen::Index r = s + o;
      if (r < 0 || r >= ns) continue;
      const double w = kernel[static_cast<std::size_t>(o + reach)];
      if (w == 0.0) continue;
      acc += w * timed.row(r).transpose();
      wsum += w;
    }
    out.row(s) = (acc / wsum).transpose();
  }
  return out;
}

CoherenceMap coherence(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const std::vector<double>& scales,
                       double dt, double dj) {
  if (x.size() != y.size()) throw DataError(DataFault::BadShape, kModule, "series lengths differ");
  check_scales(scales);
  CoherenceMap map;
  map.scales = scales;
  for (double s : scales) map.periods.push_back(fourier_period(s));
  map.dt = dt;
  map.dj = dj;
  Fields f = coherence_fields(x, y, scales, dt, dj);
  map.r2 = std::move(f.r2);
  map.phase = std::move(f.phase);
  map.coi = cone_of_influence(x.size(), dt);
  map.in_coi = coi_mask(scales, map.coi);
  map.pvals = Eigen::MatrixXd::Constant(map.r2.rows(), map.r2.cols(), std::numeric_limits<double>::quiet_NaN());
  map.qvals = map.pvals;
  map.significant = BoolField::Constant(map.r2.rows(), map.r2.cols(), false);
  return map;
}

Ar1Fit fit_ar1(const Eigen::VectorXd& x) {
  if (x.size() < 3) throw DataError(DataFault::BadShape, kModule, "AR(1) fit needs at least 3 points");
  Ar1Fit fit;
  fit.mean = x.mean();
  const Eigen::VectorXd c = x.array() - fit.mean;
  const double ss = c.squaredNorm();
  if (!(ss > 0.0)) throw DataError(DataFault::DegenerateScale, kModule, "constant series has no AR(1) null");
  const Eigen::Index n = x.size();
  fit.rho = c.tail(n - 1).dot(c.head(n - 1)) / ss;
  fit.sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (std::abs(fit.rho) >= 1.0 - 1e-9)
    throw NumericalError(kModule, "lag-1 autocorrelation is on the unit circle");
  return fit;
}

std::vector<Eigen::VectorXd> ar1_surrogates(const Eigen::VectorXd& x, std::size_t count, std::uint64_t seed) {
  const Ar1Fit fit = fit_ar1(x);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (std::size_t b = 0; b < count; ++b) {
    Rng rng = make_stream(seed, b);
    out.push_back(ar1_path(fit, x.size(), rng));
  }
  return out;
}

CoherenceMap coherence_significance(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                    const std::vector<double>& scales, double dt, const SignificanceOptions& opts,
                                    double dj) {
  if (opts.replications < 1) throw ConfigError(kModule, "replications must be >= 1");
  CoherenceMap map = coherence(x, y, scales, dt, dj);
  map.replications = opts.replications;
  map.alpha_fdr = opts.alpha_fdr;
  const Ar1Fit fx = fit_ar1(x);
  const Ar1Fit fy = fit_ar1(y);
  const auto reps = static_cast<std::size_t>(opts.replications);
  const unsigned chunks = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(reps)));
  std::vector<Eigen::MatrixXi> counts(chunks, Eigen::MatrixXi::Zero(map.r2.rows(), map.r2.cols()));
  const std::size_t per = (reps + chunks - 1) / chunks;
  parallel_for(chunks, chunks, [&](std::size_t c) {
    for (std::size_t b = c * per; b < std::min(reps, (c + 1) * per); ++b) {
      Rng rx = make_stream(opts.seed, 2 * b);
      Rng ry = make_stream(opts.seed, 2 * b + 1);
      const Fields f = coherence_fields(ar1_path(fx, x.size(), rx), ar1_path(fy, y.size(), ry), scales, dt, dj);
      counts[c] += (f.r2.array() >= map.r2.array()).cast<int>().matrix();
    }
  });
  Eigen::MatrixXi total = Eigen::MatrixXi::Zero(map.r2.rows(), map.r2.cols());
  for (const auto& c : counts) total += c;
  const double denom = static_cast<double>(reps + 1);
  for (Eigen::Index s = 0; s < map.r2.rows(); ++s)
    for (Eigen::Index t = 0; t < map.r2.cols(); ++t)
      map.pvals(s, t) = map.in_coi(s, t) ? std::numeric_limits<double>::quiet_NaN()
                                         : static_cast<double>(total(s, t) + 1) / denom;
  map.significant = fdr_bh_per_scale(map.pvals, opts.alpha_fdr);
  map.qvals = by_pooled_qvalues(map.pvals);
  return map;
}

}  // namespace bvarx
