// Parallel kernels against their serial references.

#include "cgst/lhv.hpp"
#include "cgst/parallel.hpp"
#include "cgst/quantum.hpp"
#include "cgst/sampler.hpp"
#include "cgst/sos.hpp"
#include "cgst/swap.hpp"

#include <benchmark/benchmark.h>

using namespace cgst;

namespace {

void BM_LhvParallel(benchmark::State& st) {
  const auto spec = bell::BellSpec::make(static_cast<int>(st.range(0)), 4);
  for (auto _ : st) benchmark::DoNotOptimize(lhv::brute_force_min(spec).min_value);
}

void BM_LhvSerial(benchmark::State& st) {
  const auto spec = bell::BellSpec::make(static_cast<int>(st.range(0)), 4);
  for (auto _ : st) benchmark::DoNotOptimize(lhv::reference::brute_force_min(spec).min_value);
}

void BM_TableParallel(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto state = quantum::random_singlet(n, 1);
  const auto obs = quantum::observables_from_angles(quantum::MeasurementAngles::equispaced(n, 4));
  for (auto _ : st) benchmark::DoNotOptimize(quantum::correlator_table(state, obs));
}

void BM_TableSerial(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto state = quantum::random_singlet(n, 1);
  const auto obs = quantum::observables_from_angles(quantum::MeasurementAngles::equispaced(n, 4));
  for (auto _ : st) benchmark::DoNotOptimize(quantum::reference::correlator_table(state, obs));
}

void BM_SamplerParallel(benchmark::State& st) {
  const auto state = quantum::random_singlet(4, 2);
  const auto angles = quantum::MeasurementAngles::equispaced(4, 3);
  for (auto _ : st) benchmark::DoNotOptimize(sampler::sample_rounds(state, angles, static_cast<std::uint64_t>(st.range(0)), 5));
}

void BM_SamplerSerial(benchmark::State& st) {
  const auto state = quantum::random_singlet(4, 2);
  const auto angles = quantum::MeasurementAngles::equispaced(4, 3);
  for (auto _ : st)
    benchmark::DoNotOptimize(sampler::reference::sample_rounds(state, angles, static_cast<std::uint64_t>(st.range(0)), 5));
}

void BM_BellOperatorFast(benchmark::State& st) {
  const auto m = sos::random_blackbox(bell::BellSpec::make(3, 4), PartyDims({3, 3, 3}), 3);
  for (auto _ : st) benchmark::DoNotOptimize(sos::bell_operator(m));
}

void BM_BellOperatorSerial(benchmark::State& st) {
  const auto m = sos::random_blackbox(bell::BellSpec::make(3, 4), PartyDims({3, 3, 3}), 3);
  for (auto _ : st) benchmark::DoNotOptimize(sos::reference::bell_operator(m));
}

void BM_ExtractionFast(benchmark::State& st) {
  const auto spec = bell::BellSpec::make(2, 3);
  const auto m = sos::random_blackbox(spec, PartyDims({3, 3}), 4);
  const auto state = QuantumState::mixed(Matrix::Identity(9, 9) / 9.0, m.dims);
  for (auto _ : st) benchmark::DoNotOptimize(swap::extract_state(m, state));
}

void BM_ExtractionSerial(benchmark::State& st) {
  const auto spec = bell::BellSpec::make(2, 3);
  const auto m = sos::random_blackbox(spec, PartyDims({3, 3}), 4);
  const auto state = QuantumState::mixed(Matrix::Identity(9, 9) / 9.0, m.dims);
  for (auto _ : st) benchmark::DoNotOptimize(swap::reference::extract_state(m, state));
}

}  // namespace

BENCHMARK(BM_LhvParallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LhvSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TableParallel)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TableSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SamplerParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplerSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BellOperatorFast)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BellOperatorSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExtractionFast)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExtractionSerial)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
