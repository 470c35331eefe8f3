#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sectionlab/indexing.hpp"
#include "sectionlab/scenarios.hpp"
#include "sectionlab/stereo.hpp"

namespace sectionlab {

inline constexpr int kSchemaVersion = 1;

struct CameraSpec {
  double fx = 1000.0;
  double fy = 1000.0;
  double cx = 500.0;
  double cy = 500.0;
  int width = 1000;
  int height = 1000;
  Vec3 position = Vec3::Zero();
  Vec3 look_at = Vec3(0.0, 0.0, 1.0);
  /// World direction that appears towards the top of the image.
  Vec3 up = Vec3(0.0, -1.0, 0.0);

  CameraModel build() const;
};

struct ProjectorSpec {
  Vec3 position = Vec3(50.0, 0.0, 0.0);
  /// Central projection direction; the default aims at (0, 0, 240).
  Vec3 direction = Vec3(-50.0, 0.0, 240.0);
  Vec3 fan_axis = Vec3(0.0, 1.0, 0.0);
  int num_lines = 10;
  double pitch_deg = 5.0;
  double aperture_deg = 56.0;

  LineProjector build() const;
};

struct SceneSpec {
  /// Set for built-in scenes; empty when `surfaces` is given inline.
  std::optional<ScenarioName> builtin = ScenarioName::WallOutside;
  ScenarioParams params;
  std::vector<Surface> surfaces;

  Scene build() const;
};

struct SweepSpec {
  double fan_span_deg = 50.0;
  int line_limit = 200;
  /// Extra volume widths (mm) swept around the configured volume centre.
  std::vector<double> depth_widths;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 1;
  SceneSpec scene;
  CameraSpec main_camera;
  CameraSpec second_camera;
  ProjectorSpec projector;
  MeasurementVolume volume{200.0, 280.0};
  double noise_sigma = 0.1;
  int samples_per_line = 1000;
  MatchTolerance tolerance{1.0};
  VerifyMode mode = VerifyMode::Correct;
  bool keep_unverified = false;
  /// Region guard margin in pixels; nullopt means default_guard(noise_sigma).
  std::optional<double> guard;
  SweepSpec sweep;
  std::string out_dir = "out";

  double effective_guard() const;
  NoiseModel noise() const { return NoiseModel{noise_sigma, seed}; }
};

/// Reference configuration with every default filled in.
RunConfig default_config();

/// Defaults plus a built-in scenario.
RunConfig demo_config(ScenarioName scenario);

/// Checks every component invariant, including that the region map builds.
/// Throws ValidationError; RegionOverlap propagates with the colliding pair.
void validate(const RunConfig& config);

/// Parses the YAML schema (see docs/config.md). Unknown keys are errors.
/// Throws ParseError with line and field, ValidationError, RegionOverlap.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Shortest round-tripping-to-9-digits text for a number ("%.9g").
std::string format_number(double value);

/// Fully expanded configuration as YAML, used for the run log and stats echo.
/// `include_output` adds the output directory, which the stats echo omits
/// so that reports do not depend on where they were written.
std::string echo_config(const RunConfig& config, bool include_output = true);

}  // namespace sectionlab
