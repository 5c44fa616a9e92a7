#include "mitfas/alignment.hpp"
#include "mitfas/mi_core.hpp"
#include "mitfas/sampling.hpp"
#include "mitfas/synth.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace mitfas;

namespace {

PixelPatch noise_patch(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
    for (auto& x : v) x = static_cast<std::uint8_t>(rng());
    return PixelPatch(w, h, std::move(v));
}

Frame scene(std::uint64_t seed) {
    const PixelPatch p = make_sprite(320, 240, seed);
    return Frame(320, 240, 1, std::vector<std::uint8_t>(p.values().begin(), p.values().end()));
}

void BM_MutualInformation(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto a = noise_patch(side, side, 1), b = noise_patch(side, side, 2);
    for (auto _ : state) benchmark::DoNotOptimize(mutual_information(a, b, 128));
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_MutualInformation)->Arg(16)->Arg(64)->Arg(128);

void BM_Evaluator(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto a = noise_patch(side, side, 1), b = noise_patch(side, side, 2);
    MiEvaluator ev(a, 128);
    for (auto _ : state) benchmark::DoNotOptimize(ev(b.values()));
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_Evaluator)->Arg(16)->Arg(64)->Arg(128);

void BM_EvaluatorBinned(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto a = noise_patch(side, side, 1), b = noise_patch(side, side, 2);
    MiEvaluator ev(a, 128);
    const auto codes = premultiplied_bins(b.values(), 128);
    for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate_binned(codes.data(), static_cast<std::size_t>(side)));
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_EvaluatorBinned)->Arg(16)->Arg(64)->Arg(128);

void BM_JointHistogram(benchmark::State& state) {
    const auto a = noise_patch(64, 64, 1), b = noise_patch(64, 64, 2);
    for (auto _ : state) benchmark::DoNotOptimize(build_joint_histogram(a, b, 128));
}
BENCHMARK(BM_JointHistogram);

void BM_SearchBestWindow(benchmark::State& state) {
    const Frame f = scene(3);
    const auto ref = make_reference(f, BBox{140, 90, 40, 60});
    SearchConfig c;
    c.stride = static_cast<int>(state.range(0));
    c.scale_set = {1.0};
    const Rect area{100, 50, 120, 140};
    for (auto _ : state) benchmark::DoNotOptimize(search_best_window(f, ref, area, c));
}
BENCHMARK(BM_SearchBestWindow)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SampleSequence(benchmark::State& state) {
    std::vector<PixelPatch> patches;
    for (std::uint64_t i = 0; i < 64; ++i) patches.push_back(noise_patch(44, 75, i));
    SamplingConfig c;
    c.n_frames = 16;
    for (auto _ : state) benchmark::DoNotOptimize(sample_sequence(patches, c));
}
BENCHMARK(BM_SampleSequence)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
