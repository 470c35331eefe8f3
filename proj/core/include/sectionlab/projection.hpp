#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sectionlab/geometry.hpp"
#include "sectionlab/scene.hpp"

namespace sectionlab {

/// Fan of N light planes through a common centre. Plane n (1-based) is the
/// plane spanned by `fan_axis` and `base_direction` rotated about
/// `fan_axis` by (n - (N + 1) / 2) * angular_pitch.
class LineProjector {
 public:
  /// `base_direction` is orthogonalized against `fan_axis`. Throws
  /// ValidationError on N < 1, non-positive pitch or aperture, or
  /// parallel direction/axis.
  LineProjector(Vec3 center, Vec3 base_direction, Vec3 fan_axis, int num_lines,
                double angular_pitch, double sample_aperture);

  const Vec3& center() const noexcept { return center_; }
  const Vec3& base_direction() const noexcept { return base_direction_; }
  const Vec3& fan_axis() const noexcept { return fan_axis_; }
  int num_lines() const noexcept { return num_lines_; }
  double angular_pitch() const noexcept { return angular_pitch_; }
  /// Full angle, within each plane, over which sample rays are spread.
  double sample_aperture() const noexcept { return sample_aperture_; }

  /// Rotation of plane `index` about the fan axis, relative to the base direction.
  double line_angle(int index) const;
  /// Central in-plane direction of line `index`.
  Vec3 line_direction(int index) const;

  LineProjector with_lines(int num_lines, double angular_pitch) const;
  LineProjector moved(const RigidTransform& world_motion) const;

 private:
  Vec3 center_;
  Vec3 base_direction_;
  Vec3 fan_axis_;
  int num_lines_;
  double angular_pitch_;
  double sample_aperture_;
};

/// Depth range [z_min, z_max] along the main camera's optical axis.
struct MeasurementVolume {
  double z_min = 0.0;
  double z_max = 0.0;

  /// Throws ValidationError unless 0 < z_min < z_max.
  void validate() const;
  double width() const { return z_max - z_min; }
};

enum class CameraId : std::uint8_t { Main = 0, Second = 1 };

const char* to_string(CameraId id);

/// A sub-pixel line centre on one chip. `truth_index` and `truth_point` are
/// simulator ground truth for auditing only; indexing and verification
/// never look at them.
struct ChipSignal {
  PixelCoord pixel;
  CameraId camera = CameraId::Main;
  int truth_index = 0;
  Vec3 truth_point = Vec3::Zero();
  int truth_surface = -1;
  int sample_index = 0;
};

struct Frame {
  CameraId camera = CameraId::Main;
  std::vector<ChipSignal> signals;
  double noise_sigma = 0.0;
};

struct NoiseModel {
  double sigma = 0.1;
  std::uint64_t seed = 0;
};

/// Light plane L_index. Throws IndexOutOfRange unless 1 <= index <= N.
Plane light_plane(const LineProjector& projector, int index);

struct SurfaceSample {
  Vec3 point;
  int line_index = 0;
  int sample_index = 0;
  int surface_id = -1;
};

/// Nearest scene hits of `num_samples` rays spread evenly over the sample
/// aperture inside plane L_index. Rays that miss produce no sample.
std::vector<SurfaceSample> sample_line_points(const LineProjector& projector, int index,
                                              const Scene& scene, int num_samples);

/// True when the first scene hit along the ray from `eye` towards `point`
/// is `point` itself (within `tolerance` mm).
bool is_visible_from(const Scene& scene, const Vec3& eye, const Vec3& point,
                     double tolerance = 1e-6);

/// Simultaneous exposure of both cameras from one sampling pass. Pixel noise
/// is drawn from a stream keyed on (seed, camera, line, sample), so results
/// do not depend on evaluation order.
std::pair<Frame, Frame> render_frames(const Scene& scene, const LineProjector& projector,
                                      const CameraModel& main_camera,
                                      const CameraModel& second_camera, const NoiseModel& noise,
                                      int samples_per_line);

}  // namespace sectionlab
