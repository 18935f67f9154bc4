// Microbenchmarks for the numeric hot paths: the special-function kernel,
// the conversion minimization, the bound objective, and the full optimizer.
// Build requires a system google-benchmark; the directory is skipped
// otherwise.

#include <benchmark/benchmark.h>

#include "adagrow/bounds.hpp"
#include "adagrow/privacy.hpp"
#include "adagrow/schedule.hpp"
#include "adagrow/specfun.hpp"

namespace {

using namespace adagrow;

void BM_erfc_inv(benchmark::State& state) {
    double p = 1e-9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(erfc_inv(p));
        p = p < 1.0 ? p * 1.0000001 : 1e-9;
    }
}
BENCHMARK(BM_erfc_inv);

void BM_gamma_star(benchmark::State& state) {
    double rho = 1e-4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gamma_star(rho, 0.05));
        rho = rho < 1.0 ? rho * 1.0001 : 1e-4;
    }
}
BENCHMARK(BM_gamma_star);

void BM_zcdp_to_approx_dp(benchmark::State& state) {
    // 500k-round curve: the dense conversion the per-round guarantees use.
    QueryAllocation alloc =
        batch_allocation(10000, 10, {500000, 1500000});
    RhoCurve rho = gauss_rho_curve(alloc, 0.01);
    for (auto _ : state)
        benchmark::DoNotOptimize(zcdp_to_approx_dp(rho, 0.05));
}
BENCHMARK(BM_zcdp_to_approx_dp)->Unit(benchmark::kMillisecond);

void BM_lambda_objective(benchmark::State& state) {
    // Segment fast path: what every optimizer step evaluates.
    BatchPlan plan = make_batch_plan(10000, 10, {500000, 1500000});
    FreeParams p{0.008, 1e-5, 0.04, 0.0, 1.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            lambda_objective(p, plan, 0.05, DeltaMode::nonuniform));
}
BENCHMARK(BM_lambda_objective);

void BM_ours_bound(benchmark::State& state) {
    BatchPlan plan = make_batch_plan(1000, 10, {1000, 3000});
    OptConfig cfg;
    cfg.restarts = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            ours_bound(plan, 0.05, DeltaMode::nonuniform, cfg));
}
BENCHMARK(BM_ours_bound)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_max_queries(benchmark::State& state) {
    AccuracySpec spec{0.1, 0.05};
    OptConfig cfg;
    cfg.restarts = 4;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            max_queries(Method::OursN, {1000, 3000}, 10, spec, cfg));
}
BENCHMARK(BM_max_queries)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
