#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <optional>

namespace sectionlab {

/// World coordinates are millimetres. Camera frames are +z forward,
/// +x towards increasing u (right) and +y towards increasing v (down).
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Sub-pixel chip coordinate. May lie off-chip; callers check bounds.
struct PixelCoord {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

double pixel_distance(const PixelCoord& a, const PixelCoord& b);

/// World-to-camera rigid transform: p_cam = rotation * p_world + translation.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 apply_inverse(const Vec3& p) const { return rotation.transpose() * (p - translation); }
  RigidTransform inverse() const;
  /// this ∘ other (apply `other` first).
  RigidTransform compose(const RigidTransform& other) const;
};

/// Pose of a camera at `eye` looking at `target`. `up` is the world
/// direction that should appear towards the top of the image (-v).
RigidTransform look_at(const Vec3& eye, const Vec3& target, const Vec3& up);

class CameraModel {
 public:
  /// Throws ValidationError unless fx, fy > 0, the chip is non-empty and
  /// the pose rotation is orthonormal with determinant +1 (within 1e-9).
  CameraModel(double fx, double fy, double cx, double cy, int width, int height,
              RigidTransform pose = RigidTransform::identity());

  /// 1000x1000 chip, f = 1000 px, principal point at the chip centre.
  static CameraModel reference(RigidTransform pose = RigidTransform::identity());

  double fx() const noexcept { return fx_; }
  double fy() const noexcept { return fy_; }
  double cx() const noexcept { return cx_; }
  double cy() const noexcept { return cy_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const RigidTransform& pose() const noexcept { return pose_; }

  /// Camera centre in world coordinates.
  Vec3 center() const { return pose_.apply_inverse(Vec3::Zero()); }
  Vec3 to_camera(const Vec3& world) const { return pose_.apply(world); }

  /// Chip covers u in [0, width), v in [0, height).
  bool in_bounds(const PixelCoord& p) const noexcept;

  /// Same intrinsics, pose replaced by `pose ∘ world_motion^-1`, i.e. the
  /// camera moved together with the scene by `world_motion`.
  CameraModel moved(const RigidTransform& world_motion) const;

 private:
  double fx_, fy_, cx_, cy_;
  int width_, height_;
  RigidTransform pose_;
};

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit

  /// Normalizes `direction`; throws ValidationError on a zero vector.
  static Ray through(const Vec3& origin, const Vec3& direction);
  Vec3 at(double t) const { return origin + t * direction; }
};

/// { p : normal · p = offset }, normal unit length.
struct Plane {
  Vec3 normal;
  double offset = 0.0;

  static Plane from_point_normal(const Vec3& point, const Vec3& normal);
  double signed_distance(const Vec3& p) const { return normal.dot(p) - offset; }
  Plane transformed(const RigidTransform& motion) const;
};

inline constexpr double kMinDepth = 1e-12;
inline constexpr double kGrazingLimit = 1e-9;

/// Pinhole projection. Throws PointBehindCamera when z_cam <= 1e-12.
PixelCoord project(const CameraModel& camera, const Vec3& point);

/// Non-throwing projection for hot loops; nullopt when behind the camera.
std::optional<PixelCoord> try_project(const CameraModel& camera, const Vec3& point);

/// Ray from the camera centre through `pixel`, in world coordinates.
Ray pixel_ray(const CameraModel& camera, const PixelCoord& pixel);

/// Throws RayParallelToPlane when |n·d| <= 1e-9 and IntersectionBehindRay when t <= 0.
Vec3 intersect_ray_plane(const Ray& ray, const Plane& plane);

/// Ray parameter of the plane hit, or nullopt when grazing or t <= 0.
std::optional<double> try_ray_plane_parameter(const Ray& ray, const Plane& plane);

/// Light-sectioning triangulation: the viewing ray of `pixel` cut with `plane`.
Vec3 triangulate(const CameraModel& camera, const PixelCoord& pixel, const Plane& plane);

std::optional<Vec3> try_triangulate(const CameraModel& camera, const PixelCoord& pixel,
                                    const Plane& plane);

/// Distance from `point` to the infinite line through `ray`.
double distance_to_line(const Ray& ray, const Vec3& point);

}  // namespace sectionlab
