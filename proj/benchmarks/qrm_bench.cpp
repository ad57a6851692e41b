#include <benchmark/benchmark.h>

#include <random>

#include "qrm/qrm_solver.hpp"

namespace {

qrm::ConfigurationSet random_set(std::size_t size, std::size_t dims) {
  std::vector<qrm::PosetDescriptor> space;
  for (std::size_t i = 0; i < dims; ++i) space.push_back({"d" + std::to_string(i), qrm::OrderKind::le()});
  qrm::ConfigurationSet set{qrm::ConfigurationSpace(space)};
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::int64_t> v(0, 1000);
  while (set.size() < size) {
    std::vector<qrm::Value> c;
    for (std::size_t i = 0; i < dims; ++i) c.push_back(qrm::Value::integer(v(rng)));
    set.insert(qrm::Configuration(c));
  }
  return set;
}

void BM_Minimize(benchmark::State& state) {
  const auto set = random_set(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(qrm::minimize(set));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Minimize)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_ScalerEnumeration(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qrm::video::scaler_interface());
}
BENCHMARK(BM_ScalerEnumeration);

qrm::solver::Scenario scenario(std::size_t streams) {
  using qrm::video::format;
  using qrm::video::resolution;
  qrm::solver::Scenario s;
  s.platforms = 3;
  for (int i = 0; i < 3; ++i) s.streams.push_back({format("HD+", 90), resolution("HD")});
  for (int i = 0; i < 3; ++i) s.streams.push_back({format("HD", 60), resolution("qHD")});
  if (streams == 7) s.streams.push_back({format("qHD", 60), resolution("nHD")});
  return s;
}

void BM_Solve(benchmark::State& state) {
  const auto s = scenario(static_cast<std::size_t>(state.range(0)));
  qrm::solver::SolveOptions opts;
  opts.jobs = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(qrm::solver::solve(s, opts));
}
BENCHMARK(BM_Solve)->Args({6, 1})->Args({7, 1})->Args({7, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
