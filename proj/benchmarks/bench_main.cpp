#include <benchmark/benchmark.h>

#include "bvarx/forecast.hpp"
#include "bvarx/szbvar.hpp"
#include "bvarx/tuner.hpp"
#include "bvarx/wavelet.hpp"
#include "synth.hpp"

using namespace bvarx;

namespace {

// 5 endogenous + 4 exogenous monthly panel, the shape of the country runs.
Panel country_panel(Eigen::Index rows) {
  testing::VarSpec spec;
  spec.mu = Eigen::VectorXd::LinSpaced(5, 0.5, 2.5);
  spec.phi = {0.5 * Eigen::MatrixXd::Identity(5, 5)};
  spec.gamma = 0.2 * Eigen::MatrixXd::Ones(5, 4);
  spec.sigma = 0.05 * Eigen::MatrixXd::Identity(5, 5);
  Rng rng = make_stream(1, 0);
  Eigen::MatrixXd x;
  const Eigen::MatrixXd y = testing::simulate_var(spec, rows, rng, x);
  return testing::make_panel(y, x);
}

SzHyper hyper(int p) {
  SzHyper h;
  h.p = p;
  h.lambda5 = 0.5;
  return h;
}

}  // namespace

static void BM_PosteriorUpdate(benchmark::State& state) {
  const Panel panel = country_panel(351);
  const SzHyper h = hyper(static_cast<int>(state.range(0)));
  const DesignMatrices design = build_design(panel, h.p);
  const MniwPrior prior = build_prior(h, panel);
  for (auto _ : state) benchmark::DoNotOptimize(posterior_update(prior, design));
}
BENCHMARK(BM_PosteriorUpdate)->Arg(1)->Arg(2)->Arg(6)->Arg(12);

static void BM_SampleDirect(benchmark::State& state) {
  const Panel panel = country_panel(351);
  const SzHyper h = hyper(2);
  const MniwPosterior post = posterior_update(build_prior(h, panel), build_design(panel, h.p));
  SamplerOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(sample_direct(post, h.p, 4, static_cast<std::size_t>(state.range(0)), opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleDirect)->Arg(100)->Arg(1000);

static void BM_SimulateAndIntervals(benchmark::State& state) {
  const Panel panel = country_panel(351);
  const SzHyper h = hyper(2);
  const MniwPosterior post = posterior_update(build_prior(h, panel), build_design(panel, h.p));
  const ParamDraw mean = posterior_mean_params(post, h.p, 4);
  const int horizon = 24;
  const ExogPath exog = future_exog(panel, horizon);
  const Eigen::MatrixXd point = point_forecast(mean, panel, exog, horizon);
  const auto paths = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const DrawCube cube = simulate_paths(mean, mean.sigma, panel, exog, horizon, paths);
    benchmark::DoNotOptimize(credible_intervals(cube, SupportBounds::unbounded(5), 0.5, point));
  }
}
BENCHMARK(BM_SimulateAndIntervals)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_GridCandidate(benchmark::State& state) {
  const Panel panel = country_panel(351);
  const SzHyper h = hyper(2);
  const auto origins = default_origins(panel.rows(), 12, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_candidate(panel, h, 12, origins, TuneOptions{}, nullptr));
}
BENCHMARK(BM_GridCandidate)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_Cwt(benchmark::State& state) {
  Rng rng = make_stream(2, 0);
  const Eigen::VectorXd x = standard_normal(rng, state.range(0), 1).col(0);
  const auto scales = default_scales(x.size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(morlet_cwt(x, scales, 1.0));
}
BENCHMARK(BM_Cwt)->Arg(128)->Arg(351)->Arg(1024);

static void BM_CoherenceSignificance(benchmark::State& state) {
  Rng rng = make_stream(3, 0);
  const Eigen::VectorXd x = standard_normal(rng, 351, 1).col(0);
  const Eigen::VectorXd y = standard_normal(rng, 351, 1).col(0);
  const auto scales = default_scales(351, 1.0);
  SignificanceOptions opts;
  opts.replications = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coherence_significance(x, y, scales, 1.0, opts));
}
BENCHMARK(BM_CoherenceSignificance)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
