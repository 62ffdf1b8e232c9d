#include "snns/genmodel.hpp"
#include "snns/iterpca.hpp"
#include "snns/kdnns.hpp"
#include "snns/linalg.hpp"
#include "snns/pcatree.hpp"
#include "snns/rng.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace snns;

namespace {

NoisyInstance instance(std::size_t n, std::size_t d, std::size_t k) {
    const PlantedInstance inst = gen_planted(PlantedParams{n, d, k, 0.3, 1, Geometry::random_cluster});
    return perturb_gaussian(inst, auto_sigma(n, d, 0.3), false, 2);
}

IterPcaParams iterpca_params(const NoisyInstance& inst) {
    IterPcaParams p;
    p.epsilon = 0.3;
    p.sigma = inst.sigma;
    p.k = inst.base.params.k;
    p.seed = 3;
    return p;
}

void BM_Svd(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const auto d = static_cast<Eigen::Index>(state.range(1));
    Rng rng(1);
    DenseMatrix m(n, d);
    for (auto& x : m.reshaped()) x = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(svd(m));
}
BENCHMARK(BM_Svd)->Args({1000, 128})->Args({1000, 512})->Unit(benchmark::kMillisecond);

void BM_IterpcaBuild(benchmark::State& state) {
    const NoisyInstance inst = instance(static_cast<std::size_t>(state.range(0)), 512, 6);
    const IterPcaParams p = iterpca_params(inst);
    for (auto _ : state) benchmark::DoNotOptimize(build_iterpca(inst.noisy_points, p));
}
BENCHMARK(BM_IterpcaBuild)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_IterpcaQuery(benchmark::State& state) {
    const NoisyInstance inst = instance(static_cast<std::size_t>(state.range(0)), 512, 6);
    const IterPcaIndex index = build_iterpca(inst.noisy_points, iterpca_params(inst));
    for (auto _ : state) benchmark::DoNotOptimize(index.query(inst.noisy_query));
}
BENCHMARK(BM_IterpcaQuery)->Arg(2000)->Arg(4000)->Unit(benchmark::kMicrosecond);

void BM_PcatreeBuild(benchmark::State& state) {
    const NoisyInstance inst = instance(static_cast<std::size_t>(state.range(0)), 256, 4);
    for (auto _ : state) benchmark::DoNotOptimize(build_tree(inst.noisy_points, PcaTreeParams{0.3, 4, 0}));
}
BENCHMARK(BM_PcatreeBuild)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_PcatreeQuery(benchmark::State& state) {
    const NoisyInstance inst = instance(static_cast<std::size_t>(state.range(0)), 256, 4);
    const PcaTree tree = build_tree(inst.noisy_points, PcaTreeParams{0.3, 4, 0});
    for (auto _ : state) benchmark::DoNotOptimize(tree.query(inst.noisy_query));
}
BENCHMARK(BM_PcatreeQuery)->Arg(2000)->Arg(4000)->Unit(benchmark::kMicrosecond);

void BM_LinearScan(benchmark::State& state) {
    const NoisyInstance inst = instance(static_cast<std::size_t>(state.range(0)), 512, 6);
    for (auto _ : state) benchmark::DoNotOptimize(scan_nearest(inst.noisy_points, inst.noisy_query));
}
BENCHMARK(BM_LinearScan)->Arg(2000)->Arg(4000)->Unit(benchmark::kMicrosecond);

void BM_LowDimQuery(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    Rng rng(4);
    DenseMatrix coords(n, 6);
    for (auto& x : coords.reshaped()) x = rng.normal();
    std::vector<PointId> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), PointId{0});
    const LowDimIndex index = build_lowdim(coords, ids);
    Vector q(6);
    for (auto& x : q) x = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(index.query(q));
}
BENCHMARK(BM_LowDimQuery)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
