#include <benchmark/benchmark.h>

#include <random>

#include "chronoca/ca_engine.hpp"
#include "chronoca/chronocluster.hpp"

namespace {

using namespace chronoca;

ContingencyTable random_table(std::size_t rows, std::size_t cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> cell(0.5, 50.0);
    std::vector<std::vector<double>> data(rows, std::vector<double>(cols));
    for (auto& r : data)
        for (auto& v : r) v = cell(rng);
    return ContingencyTable::from_rows(data);
}

PointSet random_walk(std::size_t n, std::size_t dim, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> step(0.0, 1.0);
    PointSet pts(n, dim);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) pts(i, d) = pts(i - 1, d) + step(rng);
    return pts;
}

PointSet uniform_points(std::size_t n, std::size_t dim, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointSet pts(n, dim);
    for (double& v : pts.data()) v = u(rng);
    return pts;
}

void BM_Analyze(benchmark::State& state) {
    const auto table = random_table(static_cast<std::size_t>(state.range(0)),
                                    static_cast<std::size_t>(state.range(1)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(table));
}
BENCHMARK(BM_Analyze)->Args({50, 20})->Args({204, 144})->Unit(benchmark::kMillisecond);

void BM_ClusterUniform2D(benchmark::State& state) {
    const auto pts = uniform_points(static_cast<std::size_t>(state.range(0)), 2, 11);
    for (auto _ : state) benchmark::DoNotOptimize(cluster_sequence(pts));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClusterUniform2D)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond)->Complexity();

void BM_ClusterRandomWalk(benchmark::State& state) {
    const auto pts = random_walk(static_cast<std::size_t>(state.range(0)), 8, 13);
    for (auto _ : state) benchmark::DoNotOptimize(cluster_sequence(pts));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClusterRandomWalk)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond)->Complexity();

}  // namespace
BENCHMARK_MAIN();
