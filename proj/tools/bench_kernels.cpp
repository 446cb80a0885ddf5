// Serial reference loops vs their OpenMP counterparts on solver-sized inputs.

#include <benchmark/benchmark.h>

#include <numbers>

#include "scatlab/geometry.hpp"
#include "scatlab/kernels.hpp"
#include "scatlab/scatter.hpp"

using namespace scatlab;

namespace {

struct Problem {
    kernels::BoundaryNodes nodes;
    std::vector<Point> sources;
    std::vector<kernels::cplx> coeffs;
    std::vector<Point> directions;
};

const Problem& problem() {
    static const Problem p = [] {
        Problem p;
        const PlacedCurve kite(catalog::kite());
        const MfsConfig cfg;
        p.sources = mfs_sources(kite, cfg);
        for (int i = 0; i < cfg.collocation_points(); ++i) {
            const auto s = kite.eval(2.0 * std::numbers::pi * i / cfg.collocation_points());
            p.nodes.points.push_back(s.point);
            p.nodes.normals.push_back(s.normal);
        }
        for (std::size_t q = 0; q < p.sources.size(); ++q) p.coeffs.emplace_back(std::cos(q * 0.1), std::sin(q * 0.3));
        for (int m = 0; m < 128; ++m) p.directions.push_back(direction(2.0 * std::numbers::pi * m / 128));
        return p;
    }();
    return p;
}

kernels::Exec exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? kernels::Exec::serial : kernels::Exec::parallel;
}

void BM_MfsMatrix(benchmark::State& state) {
    const auto& p = problem();
    const auto bc = BoundaryCondition::neumann();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::mfs_matrix(p.nodes, p.sources, 2.0, bc, exec_of(state)));
    }
}

void BM_PointSourceSum(benchmark::State& state) {
    const auto& p = problem();
    std::vector<Point> targets;
    for (const auto& x : p.nodes.points) targets.push_back(3.0 * x);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::point_source_sum(p.coeffs, p.sources, 2.0, targets, exec_of(state)));
    }
}

void BM_PlaneWaveSum(benchmark::State& state) {
    const auto& p = problem();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::plane_wave_sum(p.coeffs, p.sources, 2.0, p.directions, exec_of(state)));
    }
}

void BM_Dft(benchmark::State& state) {
    std::vector<kernels::cplx> in(1024);
    for (std::size_t i = 0; i < in.size(); ++i) in[i] = {std::cos(0.01 * i), std::sin(0.02 * i)};
    for (auto _ : state) benchmark::DoNotOptimize(kernels::dft(in, -1, exec_of(state)));
}

}  // namespace

// Argument 0 runs the serial reference, 1 the OpenMP path.
BENCHMARK(BM_MfsMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PointSourceSum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlaneWaveSum)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Dft)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
