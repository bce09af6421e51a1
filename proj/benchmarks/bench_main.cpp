#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "amoebakit/fibers.hpp"
#include "amoebakit/measure.hpp"
#include "amoebakit/polytope.hpp"
#include "amoebakit/rng.hpp"

using namespace amoebakit;

namespace {

const std::vector<std::string> kXY = {"x", "y"};

PolySystem curve(int degree) {
    static const char* const kCurves[] = {
        "1 + x + y",
        "1 + 0.7*x - 1.3*y + 0.9*x^2 + 1.1*x*y - 0.8*y^2",
        "1 - 0.6*x + 1.2*y + 0.5*x^2 - 0.9*x*y + 1.4*y^2 + 0.8*x^3 - 0.7*x^2*y + 1.1*x*y^2 - 0.6*y^3",
    };
    return PolySystem({parse(kCurves[degree - 1], kXY)}, kXY);
}

std::vector<LatticePoint> randomPoints(SplitMix64& rng, std::size_t dim, std::size_t count, int range) {
    std::vector<LatticePoint> points(count, LatticePoint(dim));
    for (auto& p : points) {
        for (auto& c : p) c = static_cast<std::int64_t>(rng.next() % (2 * range + 1)) - range;
    }
    return points;
}

void BM_ConvexHull(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    SplitMix64 rng(7);
    const auto points = randomPoints(rng, dim, 30, 5);
    for (auto _ : state) benchmark::DoNotOptimize(convexHull(points));
}
BENCHMARK(BM_ConvexHull)->Arg(2)->Arg(3)->Arg(4);

void BM_MixedVolume(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    SplitMix64 rng(11);
    std::vector<LatticePolytope> tuple;
    for (std::size_t k = 0; k < dim; ++k) tuple.push_back(convexHull(randomPoints(rng, dim, dim + 3, 2)));
    for (auto _ : state) benchmark::DoNotOptimize(mixedVolume(tuple));
}
BENCHMARK(BM_MixedVolume)->Arg(2)->Arg(3)->Arg(4);

void BM_AlphaBetaCubic(benchmark::State& state) {
    const auto sys = curve(3);
    for (auto _ : state) benchmark::DoNotOptimize(alphaBeta(sys));
}
BENCHMARK(BM_AlphaBetaCubic);

void BM_CurveOracle(benchmark::State& state) {
    const auto sys = curve(static_cast<int>(state.range(0)));
    const std::vector<double> q{0.3, -0.2};
    for (auto _ : state) benchmark::DoNotOptimize(curveFiberExact(sys, FiberSpace::Amoeba, q));
}
BENCHMARK(BM_CurveOracle)->Arg(1)->Arg(2)->Arg(3);

void BM_MultistartAmoeba(benchmark::State& state) {
    const auto sys = curve(static_cast<int>(state.range(0)));
    const auto deg = alphaBeta(sys);
    const std::vector<double> q{0.3, -0.2};
    for (auto _ : state) benchmark::DoNotOptimize(amoebaFiber(sys, q, {}, deg));
}
BENCHMARK(BM_MultistartAmoeba)->Arg(1)->Arg(2)->Arg(3);

void BM_MultistartCoamoeba(benchmark::State& state) {
    const auto sys = curve(static_cast<int>(state.range(0)));
    const std::vector<double> p{0.7, 2.1};
    for (auto _ : state) benchmark::DoNotOptimize(coamoebaFiber(sys, p));
}
BENCHMARK(BM_MultistartCoamoeba)->Arg(1)->Arg(2)->Arg(3);

void BM_MultiVolCoamoebaLine(benchmark::State& state) {
    const auto sys = curve(1);
    for (auto _ : state) benchmark::DoNotOptimize(multiVolCoamoeba(sys, 1000, 3, {}));
}
BENCHMARK(BM_MultiVolCoamoebaLine)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
