#pragma once

#include <algorithm>

#include "sectionlab/config.hpp"
#include "sectionlab/indexing.hpp"
#include "sectionlab/pipeline.hpp"
#include "sectionlab/projection.hpp"

namespace sectionlab::fixtures {

/// The reference desk-scale rig used throughout the tests.
struct Rig {
  RunConfig config;
  CameraModel main;
  CameraModel second;
  LineProjector projector;

  explicit Rig(RunConfig cfg = default_config())
      : config(std::move(cfg)),
        main(config.main_camera.build()),
        second(config.second_camera.build()),
        projector(config.projector.build()) {}

  RegionMap region_map(double guard = 0.5) const {
    return build_region_map(main, projector, config.volume, guard);
  }
};

/// A pixel in `row` that lies between the first two regions of that row.
inline PixelCoord gap_pixel(const RegionMap& map, int row) {
  auto intervals = map.row(row);
  std::sort(intervals.begin(), intervals.end(),
            [](const auto& a, const auto& b) { return a.u_min < b.u_min; });
  return PixelCoord{0.5 * (intervals.at(0).u_max + intervals.at(1).u_min), row + 0.5};
}

inline RunConfig scenario_config(ScenarioName name, double sigma, int samples = 1000) {
  RunConfig cfg = demo_config(name);
  cfg.noise_sigma = sigma;
  cfg.samples_per_line = samples;
  return cfg;
}

}  // namespace sectionlab::fixtures
