// Parallel vs serial contour quadrature and lambda sweeps.

#include <benchmark/benchmark.h>

#include <random>

#include "idemlift/funcalc.hpp"
#include "idemlift/lifting.hpp"
#include "idemlift/scenarios.hpp"

using namespace idemlift;

namespace {

struct Setup {
    Element a;
    std::vector<QuadratureNode> nodes;
};

Setup make_setup(int n, int level) {
    std::mt19937_64 rng(42);
    const auto alg = make_matrix_algebra(n);
    Setup s{random_element(alg, rng, 0.3 / std::sqrt(static_cast<double>(n))), {}};
    ContourData c;
    c.curves.push_back(Curve::from_circle(Circle{0.0, 2.0}));
    s.nodes = contour_nodes(c, level, QuadratureSettings{});
    return s;
}

const ScalarFunction kExp = [](cd z) { return std::exp(z); };

void BM_resolvent_sum_parallel(benchmark::State& state) {
    const Setup s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(resolvent_sum(kExp, s.a, s.nodes));
    state.counters["nodes"] = static_cast<double>(s.nodes.size());
}

void BM_resolvent_sum_serial(benchmark::State& state) {
    const Setup s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(resolvent_sum_serial(kExp, s.a, s.nodes));
    state.counters["nodes"] = static_cast<double>(s.nodes.size());
}

void BM_lambda_sweep(benchmark::State& state, bool parallel) {
    ScenarioParams p;
    p.grid = Grid{0.0, 0.5, 21};
    p.n = static_cast<int>(state.range(0));
    const Scenario s = build_scenario("dual-testbed", p);
    LiftOptions options;
    options.parallel = parallel;
    options.quadrature.parallel = false;
    for (auto _ : state) benchmark::DoNotOptimize(lift_local(s.pi, s.qs[0], s.sections[0], s.grid, options));
}

void BM_lambda_sweep_parallel(benchmark::State& state) { BM_lambda_sweep(state, true); }
void BM_lambda_sweep_serial(benchmark::State& state) { BM_lambda_sweep(state, false); }

}  // namespace

BENCHMARK(BM_resolvent_sum_parallel)->ArgsProduct({{4, 16, 32}, {2, 4}})->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_resolvent_sum_serial)->ArgsProduct({{4, 16, 32}, {2, 4}})->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_lambda_sweep_parallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_lambda_sweep_serial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
