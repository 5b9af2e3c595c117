// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "jointcs/decode.hpp"
#include "jointcs/ensemble.hpp"
#include "jointcs/rng.hpp"

namespace {

using namespace jointcs;

std::vector<TransformKind> shifts() {
  std::vector<TransformKind> kinds;
  for (int dx : {-2, 0, 2}) {
    for (int dy : {-2, 0, 2}) kinds.push_back(Translation2D{dx, dy});
  }
  return kinds;
}

const Dictionary& image_dictionary(int side) {
  static const Dictionary d16 = build_gaussian_2d_dictionary(image_preset_grid(16, 16));
  static const Dictionary d32 = build_gaussian_2d_dictionary(image_preset_grid(32, 32));
  return side == 16 ? d16 : d32;
}

struct Problem {
  CandidateSet candidates;
  SignalEnsemble ensemble;
  MeasurementSet measurements;
};

Problem make_problem(int side, Index views, Index s, Index m) {
  const auto& dict = image_dictionary(side);
  auto cands = CandidateSet::uniform(dict, views, shifts());
  EnsembleOptions o;
  o.sparsity = s;
  o.seed = 11;
  auto e = generate_ensemble(dict, cands.vector_at(cands.count() / 2), o);
  auto ms = measure_ensemble(sample_view_matrices(m, dict.signal_length(), views, 5), e.signals);
  return {std::move(cands), std::move(e), std::move(ms)};
}

void BM_BuildImageDictionary(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_gaussian_2d_dictionary(image_preset_grid(side, side)));
}
BENCHMARK(BM_BuildImageDictionary)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BuildTraceDictionary(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_gabor_1d_dictionary(trace_preset_grid()));
}
BENCHMARK(BM_BuildTraceDictionary)->Unit(benchmark::kMillisecond);

void BM_Backprojection(benchmark::State& state) {
  const auto p = make_problem(32, 4, 5, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ProjectedMeasurements(p.measurements, image_dictionary(32)));
}
BENCHMARK(BM_Backprojection)->Arg(40)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_CorrelationGather(benchmark::State& state) {
  const auto p = make_problem(32, 4, 5, 100);
  const ProjectedMeasurements projected(p.measurements, image_dictionary(32));
  const auto t = p.candidates.vector_at(100);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_vector(projected, t, 4));
}
BENCHMARK(BM_CorrelationGather)->Unit(benchmark::kMicrosecond);

void BM_JointThresholding(benchmark::State& state) {
  const auto p = make_problem(32, state.range(0), 5, 100);
  for (auto _ : state) benchmark::DoNotOptimize(jt_decode(p.measurements, image_dictionary(32), 5, p.candidates));
  state.counters["candidates"] = static_cast<double>(p.candidates.count());
}
BENCHMARK(BM_JointThresholding)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GreedyJointThresholding(benchmark::State& state) {
  const auto p = make_problem(32, state.range(0), 5, 150);
  for (auto _ : state) benchmark::DoNotOptimize(gjt_decode(p.measurements, image_dictionary(32), 5, p.candidates));
}
BENCHMARK(BM_GreedyJointThresholding)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_IndependentThresholding(benchmark::State& state) {
  const auto p = make_problem(32, 4, 5, 150);
  for (auto _ : state) {
    benchmark::DoNotOptimize(independent_threshold_decode(p.measurements, image_dictionary(32), 5));
  }
}
BENCHMARK(BM_IndependentThresholding)->Unit(benchmark::kMillisecond);

void BM_GenerateEnsemble(benchmark::State& state) {
  const auto& dict = image_dictionary(16);
  const auto cands = CandidateSet::uniform(dict, 4, shifts());
  std::uint64_t seed = 0;
  for (auto _ : state) {
    EnsembleOptions o;
    o.sparsity = 3;
    o.seed = seed++;
    benchmark::DoNotOptimize(generate_ensemble(dict, cands.vector_at(seed % cands.count()), o));
  }
}
BENCHMARK(BM_GenerateEnsemble)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
