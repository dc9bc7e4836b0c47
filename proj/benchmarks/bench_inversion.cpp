#include <benchmark/benchmark.h>

#include "talbot/params.hpp"
#include "talbot/problems.hpp"
#include "talbot/quadrature.hpp"
#include "talbot/roundoff.hpp"

namespace {

void BM_InvertF1(benchmark::State& state) {
    const int N = int(state.range(0));
    const auto f = talbot::Transform::scalar([](talbot::cdouble z) { return talbot::eval_F1(z, 1.0); });
    const auto params = talbot::modified_talbot();
    for (auto _ : state) benchmark::DoNotOptimize(talbot::invert(f, params, N, 1.0).value);
}
BENCHMARK(BM_InvertF1)->Arg(12)->Arg(18)->Arg(24)->Arg(48);

void BM_InvertF2(benchmark::State& state) {
    const auto f = talbot::Transform::scalar([](talbot::cdouble z) { return talbot::eval_F2(z); });
    const auto params = talbot::modified_talbot();
    for (auto _ : state) benchmark::DoNotOptimize(talbot::invert(f, params, 24, 1.0).value);
}
BENCHMARK(BM_InvertF2);

void BM_InvertHeat(benchmark::State& state) {
    const auto model = talbot::make_heat_model(int(state.range(0)));
    const auto f = talbot::heat_as_transform(model);
    const auto params = talbot::modified_talbot();
    for (auto _ : state) benchmark::DoNotOptimize(talbot::invert(f, params, 24, 1.0).value);
    state.SetLabel("J=" + std::to_string(model.dimension()));
}
BENCHMARK(BM_InvertHeat)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_StabilizedParams(benchmark::State& state) {
    const auto model = talbot::default_roundoff_model();
    for (auto _ : state) benchmark::DoNotOptimize(talbot::stabilized_params(40, model));
}
BENCHMARK(BM_StabilizedParams);

void BM_SolveSaddle(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(talbot::solve_saddle(0.6407));
}
BENCHMARK(BM_SolveSaddle);

void BM_OptimizeAlpha(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(talbot::optimize_alpha());
}
BENCHMARK(BM_OptimizeAlpha)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
