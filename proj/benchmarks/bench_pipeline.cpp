#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "sectionlab/indexing.hpp"
#include "sectionlab/pipeline.hpp"
#include "sectionlab/scenarios.hpp"
#include "sectionlab/stereo.hpp"

namespace sl = sectionlab;

namespace {

void BM_BuildRegionMap(benchmark::State& state) {
  const sl::RunConfig cfg = sl::default_config();
  const sl::CameraModel cam = cfg.main_camera.build();
  const int n = static_cast<int>(state.range(0));
  // 50 degree fan over a 40 mm deep volume holds at most 24 lines.
  const double span = 50.0 * M_PI / 180.0;
  const sl::LineProjector p = cfg.projector.build().with_lines(n, sl::sweep_pitch(span, n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sl::build_region_map(cam, p, {220.0, 260.0}, 0.5));
  }
}
BENCHMARK(BM_BuildRegionMap)->Arg(1)->Arg(12)->Arg(24);

void BM_IntersectScene(benchmark::State& state) {
  const sl::Scene scene = sl::build_scenario(sl::ScenarioName::WallOutside, sl::ScenarioParams{});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(-0.5, 0.5);
  std::vector<sl::Ray> rays;
  for (int k = 0; k < 1024; ++k) {
    rays.push_back(sl::Ray::through(sl::Vec3::Zero(), sl::Vec3(a(rng), a(rng), 1.0)));
  }
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sl::intersect_scene(scene, rays[k++ & 1023]));
  }
}
BENCHMARK(BM_IntersectScene);

void BM_SignalLookup(benchmark::State& state) {
  sl::Frame frame{sl::CameraId::Second, {}, 0.0};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int k = 0; k < 50000; ++k) {
    sl::ChipSignal s;
    s.pixel = {u(rng), u(rng)};
    s.camera = sl::CameraId::Second;
    frame.signals.push_back(s);
  }
  const sl::SignalLookup lookup(frame, 1000, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lookup.nearest_distance({u(rng), u(rng)}));
  }
}
BENCHMARK(BM_SignalLookup);

void BM_WallPipeline(benchmark::State& state) {
  sl::RunConfig cfg = sl::demo_config(sl::ScenarioName::WallOutside);
  cfg.samples_per_line = static_cast<int>(state.range(0));
  std::size_t points = 0;
  for (auto _ : state) {
    const sl::RunResult r = sl::run_pipeline(cfg);
    points = r.dataset.stats.total_points;
    benchmark::DoNotOptimize(points);
  }
  state.counters["points"] = static_cast<double>(points);
}
BENCHMARK(BM_WallPipeline)->Arg(1000)->Arg(6000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
