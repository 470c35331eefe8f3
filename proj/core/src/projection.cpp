#include "sectionlab/projection.hpp"

#include <cmath>
#include <random>

#include "sectionlab/errors.hpp"

namespace sectionlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, CameraId camera, int line, int sample) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(camera));
  h = splitmix64(h ^ static_cast<std::uint64_t>(line));
  return splitmix64(h ^ static_cast<std::uint64_t>(sample));
}

std::optional<ChipSignal> observe(const Scene& scene, const CameraModel& camera, CameraId id,
                                  const SurfaceSample& sample, const NoiseModel& noise) {
  auto pixel = try_project(camera, sample.point);
  if (!pixel || !is_visible_from(scene, camera.center(), sample.point)) {
    return std::nullopt;
  }
  if (noise.sigma > 0.0) {
    std::mt19937_64 rng(stream_seed(noise.seed, id, sample.line_index, sample.sample_index));
    std::normal_distribution<double> gauss(0.0, noise.sigma);
    pixel->u += gauss(rng);
    pixel->v += gauss(rng);
  }
  if (!camera.in_bounds(*pixel)) {
    return std::nullopt;
  }
  return ChipSignal{*pixel, id, sample.line_index, sample.point, sample.surface_id,
                    sample.sample_index};
}

}  // namespace

LineProjector::LineProjector(Vec3 center, Vec3 base_direction, Vec3 fan_axis, int num_lines,
                             double angular_pitch, double sample_aperture)
    : center_(std::move(center)),
      num_lines_(num_lines),
      angular_pitch_(angular_pitch),
      sample_aperture_(sample_aperture) {
  if (num_lines_ < 1) {
    throw ValidationError("LineProjector", "num_lines must be at least 1");
  }
  if (!(angular_pitch_ > 0.0) || !std::isfinite(angular_pitch_)) {
    throw ValidationError("LineProjector", "angular pitch must be positive");
  }
  if (!(sample_aperture_ > 0.0) || !(sample_aperture_ < M_PI)) {
    throw ValidationError("LineProjector", "sample aperture must lie in (0, 180) degrees");
  }
  if (fan_axis.norm() < 1e-12 || base_direction.norm() < 1e-12) {
    throw ValidationError("LineProjector", "direction and fan axis must be non-zero");
  }
  fan_axis_ = fan_axis.normalized();
  Vec3 base = base_direction - base_direction.dot(fan_axis_) * fan_axis_;
  if (base.norm() < 1e-9 * base_direction.norm()) {
    throw ValidationError("LineProjector", "base direction is parallel to the fan axis");
  }
  base_direction_ = base.normalized();
}

double LineProjector::line_angle(int index) const {
  if (index < 1 || index > num_lines_) {
    throw IndexOutOfRange(index, num_lines_);
  }
  return (static_cast<double>(index) - 0.5 * (num_lines_ + 1)) * angular_pitch_;
}

Vec3 LineProjector::line_direction(int index) const {
  return Eigen::AngleAxisd(line_angle(index), fan_axis_) * base_direction_;
}

LineProjector LineProjector::with_lines(int num_lines, double angular_pitch) const {
  return LineProjector(center_, base_direction_, fan_axis_, num_lines, angular_pitch,
                       sample_aperture_);
}

LineProjector LineProjector::moved(const RigidTransform& world_motion) const {
  return LineProjector(world_motion.apply(center_), world_motion.rotation * base_direction_,
                       world_motion.rotation * fan_axis_, num_lines_, angular_pitch_,
                       sample_aperture_);
}

void MeasurementVolume::validate() const {
  if (!(z_min > 0.0) || !(z_min < z_max) || !std::isfinite(z_max)) {
    throw ValidationError("MeasurementVolume", "require 0 < z_min < z_max");
  }
}

const char* to_string(CameraId id) { return id == CameraId::Main ? "main" : "second"; }

Plane light_plane(const LineProjector& projector, int index) {
  const Vec3 dir = projector.line_direction(index);
  return Plane::from_point_normal(projector.center(), projector.fan_axis().cross(dir));
}

std::vector<SurfaceSample> sample_line_points(const LineProjector& projector, int index,
                                              const Scene& scene, int num_samples) {
  const Vec3 dir = projector.line_direction(index);
  const Vec3& axis = projector.fan_axis();
  std::vector<SurfaceSample> out;
  if (num_samples < 1) {
    return out;
  }
  out.reserve(static_cast<size_t>(num_samples));
  const double half = 0.5 * projector.sample_aperture();
  for (int k = 0; k < num_samples; ++k) {
    const double phi =
        num_samples == 1 ? 0.0 : -half + projector.sample_aperture() * k / (num_samples - 1);
    const Ray ray{projector.center(), (std::cos(phi) * dir + std::sin(phi) * axis).normalized()};
    if (auto hit = intersect_scene(scene, ray)) {
      out.push_back(SurfaceSample{hit->point, index, k, hit->surface_id});
    }
  }
  return out;
}

bool is_visible_from(const Scene& scene, const Vec3& eye, const Vec3& point, double tolerance) {
  const Vec3 to_point = point - eye;
  const double dist = to_point.norm();
  if (dist < tolerance) {
    return true;
  }
  const Ray ray{eye, to_point / dist};
  auto hit = intersect_scene(scene, ray);
  return !hit || hit->t >= dist - tolerance;
}

std::pair<Frame, Frame> render_frames(const Scene& scene, const LineProjector& projector,
                                      const CameraModel& main_camera,
                                      const CameraModel& second_camera, const NoiseModel& noise,
                                      int samples_per_line) {
  Frame main_frame{CameraId::Main, {}, noise.sigma};
  Frame second_frame{CameraId::Second, {}, noise.sigma};
  for (int n = 1; n <= projector.num_lines(); ++n) {
    for (const auto& sample : sample_line_points(projector, n, scene, samples_per_line)) {
      if (auto s = observe(scene, main_camera, CameraId::Main, sample, noise)) {
        main_frame.signals.push_back(*s);
      }
      if (auto s = observe(scene, second_camera, CameraId::Second, sample, noise)) {
        second_frame.signals.push_back(*s);
      }
    }
  }
  return {std::move(main_frame), std::move(second_frame)};
}

}  // namespace sectionlab
