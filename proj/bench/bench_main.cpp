#include <benchmark/benchmark.h>

#include "vlnsim/geometry.hpp"
#include "vlnsim/sim.hpp"

namespace {

using namespace vlnsim;

OrientedBox bench_box(std::uint64_t seed) {
    Rng rng(seed);
    OrientedBox box;
    box.c = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    box.s = Vec3(rng.uniform(0.4, 1.6), rng.uniform(0.4, 1.6), rng.uniform(0.4, 1.6));
    box.R = Eigen::AngleAxisd(rng.uniform(0.0, 2 * M_PI),
                              Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1))
                                  .normalized())
                .toRotationMatrix();
    return box;
}

void BM_voxel_iou_serial(benchmark::State& state) {
    const OrientedBox a = bench_box(1);
    OrientedBox b = bench_box(2);
    b.c = a.c + Vec3(0.3, -0.2, 0.1);
    for (auto _ : state)
        benchmark::DoNotOptimize(voxel_iou_oracle_serial(a, b, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_voxel_iou_serial)->Arg(128)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_voxel_iou_parallel(benchmark::State& state) {
    const OrientedBox a = bench_box(1);
    OrientedBox b = bench_box(2);
    b.c = a.c + Vec3(0.3, -0.2, 0.1);
    for (auto _ : state)
        benchmark::DoNotOptimize(voxel_iou_oracle(a, b, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_voxel_iou_parallel)->Arg(128)->Arg(200)->Unit(benchmark::kMillisecond);

std::vector<Scene> bench_scenes() {
    std::vector<Scene> scenes;
    for (int i = 0; i < 2; ++i) {
        Scene scene = generate_scene(GenParams{}, 500 + i);
        scene.name = "bench_" + std::to_string(i);
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

std::vector<DegradationConfig> bench_grid() {
    std::vector<DegradationConfig> grid;
    for (double rho : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        DegradationConfig c;
        c.rho_ret = rho;
        grid.push_back(c);
    }
    return grid;
}

void BM_slow_sweep_serial(benchmark::State& state) {
    const auto scenes = bench_scenes();
    const auto grid = bench_grid();
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sweep_serial(scenes, grid, SweepMode::Slow, SimParams{},
                                                  scripted_planner_factory(), 42));
}
BENCHMARK(BM_slow_sweep_serial)->Unit(benchmark::kMillisecond);

void BM_slow_sweep_parallel(benchmark::State& state) {
    const auto scenes = bench_scenes();
    const auto grid = bench_grid();
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sweep(scenes, grid, SweepMode::Slow, SimParams{},
                                           scripted_planner_factory(), 42,
                                           static_cast<int>(state.range(0))));
}
BENCHMARK(BM_slow_sweep_parallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
