#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "dgsem/driver/cases.hpp"
#include "dgsem/fluxes.hpp"
#include "dgsem/solver.hpp"

using namespace dgsem;

namespace {

std::vector<State> random_states(std::size_t count) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos(0.5, 2.0), vel(-1.0, 1.0);
  std::vector<State> out(count);
  for (auto& s : out) s = physics::conservative_from_primitive({pos(rng), {vel(rng), vel(rng), vel(rng)}, pos(rng)}, {});
  return out;
}

void BM_LogMean(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.5, 2.0);
  std::vector<double> a(1024), b(1024);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = d(rng);
    b[i] = state.range(0) ? a[i] * (1 + 1e-4 * d(rng)) : d(rng);
  }
  for (auto _ : state) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += fluxes::log_mean(a[i], b[i]);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(a.size()));
}
BENCHMARK(BM_LogMean)->Arg(0)->Arg(1)->ArgName("near_equal");

void BM_TwoPointFlux(benchmark::State& state) {
  const auto kind = static_cast<fluxes::VolumeFlux>(state.range(0));
  physics::GasModel gas;
  const auto states = random_states(512);
  std::vector<fluxes::NodeState> nodes;
  for (const auto& s : states) nodes.push_back(fluxes::make_node_state(s, gas));
  const Vec3 n{0.3, -0.8, 0.5};
  for (auto _ : state) {
    State acc{};
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      acc += fluxes::two_point_flux_contracted(kind, nodes[i], nodes[i + 1], n, gas);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(nodes.size() - 1));
  state.SetLabel(std::string(fluxes::to_string(kind)));
}
BENCHMARK(BM_TwoPointFlux)->Arg(0)->Arg(1);

void BM_SplitDivergenceElement(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  solver::Discretization disc(mesh::warped_box(1, 0.05, degree), degree, geometry::MetricForm::curl, 1);
  physics::GasModel gas;
  auto u = solver::project(disc, [&](const Vec3& x, double t) { return driver::density_wave(x, t, 0.3, gas); }, 0.0);
  for (auto _ : state) {
    auto div = solver::split_divergence(u.element(0), disc.element(0), disc.basis(), fluxes::VolumeFlux::ec, gas);
    benchmark::DoNotOptimize(div.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(disc.nodes_per_element()));
}
BENCHMARK(BM_SplitDivergenceElement)->DenseRange(2, 8, 2);

void BM_Residual(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const bool viscous = state.range(1) != 0;
  auto disc = std::make_shared<const solver::Discretization>(mesh::warped_box(4, 0.05, degree), degree,
                                                             geometry::MetricForm::curl, 1);
  physics::GasModel gas;
  solver::SemiDiscretization rhs(disc, gas, {fluxes::VolumeFlux::ec, fluxes::Dissipation::llf, viscous});
  auto u = solver::project(*disc, [&](const Vec3& x, double t) { return driver::density_wave(x, t, 0.3, gas); }, 0.0);
  solver::SolutionField dudt;
  for (auto _ : state) {
    rhs.residual(u, dudt);
    benchmark::DoNotOptimize(dudt.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(u.values.size()));
}
BENCHMARK(BM_Residual)->Args({3, 0})->Args({3, 1})->Args({5, 0})->Unit(benchmark::kMillisecond);

void BM_LiftGradients(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  solver::Discretization disc(mesh::warped_box(4, 0.05, degree), degree, geometry::MetricForm::curl, 1);
  physics::GasModel gas;
  auto u = solver::project(disc, [&](const Vec3& x, double t) { return driver::density_wave(x, t, 0.3, gas); }, 0.0);
  for (auto _ : state) {
    auto q = solver::lift_gradients(u, disc, gas);
    benchmark::DoNotOptimize(q.values.data());
  }
}
BENCHMARK(BM_LiftGradients)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
