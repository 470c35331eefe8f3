#include "sectionlab/pipeline.hpp"

#include <cmath>

namespace sectionlab {

RunResult run_pipeline(const RunConfig& config) {
  validate(config);
  const Scene scene = config.scene.build();
  const CameraModel main = config.main_camera.build();
  const CameraModel second = config.second_camera.build();
  const LineProjector projector = config.projector.build();
  const RegionMap map = build_region_map(main, projector, config.volume, config.effective_guard());

  auto [main_frame, second_frame] =
      render_frames(scene, projector, main, second, config.noise(), config.samples_per_line);

  const VerifyOptions options{config.mode, config.tolerance, config.keep_unverified};
  DatasetResult dataset =
      process_dataset(main_frame, second_frame, map, main, second, projector, options);
  TruthAudit audit = audit_against_truth(dataset.points, second_frame);

  return RunResult{config, std::move(main_frame), std::move(second_frame), std::move(dataset),
                   audit};
}

SweepReport run_sweep(const RunConfig& config) {
  const CameraModel main = config.main_camera.build();
  const LineProjector projector = config.projector.build();
  const double span = config.sweep.fan_span_deg * M_PI / 180.0;

  SweepReport report;
  report.fan_span_deg = config.sweep.fan_span_deg;
  report.guard = config.effective_guard();

  std::vector<MeasurementVolume> volumes{config.volume};
  const double mid = 0.5 * (config.volume.z_min + config.volume.z_max);
  for (double w : config.sweep.depth_widths) {
    volumes.push_back(MeasurementVolume{mid - 0.5 * w, mid + 0.5 * w});
  }
  for (const auto& volume : volumes) {
    volume.validate();
    report.entries.push_back(SweepEntry{
        volume,
        sweep_line_count(main, projector, volume, report.guard, span, config.sweep.line_limit)});
  }
  return report;
}

}  // namespace sectionlab
