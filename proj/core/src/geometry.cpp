#include "sectionlab/geometry.hpp"

#include <cmath>

#include "sectionlab/errors.hpp"

namespace sectionlab {

double pixel_distance(const PixelCoord& a, const PixelCoord& b) {
  return std::hypot(a.u - b.u, a.v - b.v);
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

RigidTransform RigidTransform::compose(const RigidTransform& other) const {
  RigidTransform out;
  out.rotation = rotation * other.rotation;
  out.translation = rotation * other.translation + translation;
  return out;
}

RigidTransform look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 forward = target - eye;
  if (forward.norm() < 1e-12) {
    throw ValidationError("CameraModel", "look_at target coincides with eye");
  }
  const Vec3 z = forward.normalized();
  // Image rows grow downwards, so camera +y is the opposite of `up`.
  Vec3 x = (-up).cross(z);
  if (x.norm() < 1e-12) {
    throw ValidationError("CameraModel", "look_at up vector is parallel to the view direction");
  }
  x.normalize();
  const Vec3 y = z.cross(x);

  RigidTransform pose;
  pose.rotation.row(0) = x.transpose();
  pose.rotation.row(1) = y.transpose();
  pose.rotation.row(2) = z.transpose();
  pose.translation = -(pose.rotation * eye);
  return pose;
}

CameraModel::CameraModel(double fx, double fy, double cx, double cy, int width, int height,
                         RigidTransform pose)
    : fx_(fx), fy_(fy), cx_(cx), cy_(cy), width_(width), height_(height), pose_(std::move(pose)) {
  if (!(fx_ > 0.0) || !(fy_ > 0.0)) {
    throw ValidationError("CameraModel", "focal lengths must be positive");
  }
  if (width_ <= 0 || height_ <= 0) {
    throw ValidationError("CameraModel", "chip dimensions must be positive");
  }
  if (!std::isfinite(cx_) || !std::isfinite(cy_) || !pose_.translation.allFinite()) {
    throw ValidationError("CameraModel", "non-finite principal point or translation");
  }
  const Mat3& r = pose_.rotation;
  if (!r.allFinite() || ((r * r.transpose()) - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw ValidationError("CameraModel", "pose rotation is not orthonormal");
  }
  if (std::abs(r.determinant() - 1.0) > 1e-9) {
    throw ValidationError("CameraModel", "pose rotation must have determinant +1");
  }
}

CameraModel CameraModel::reference(RigidTransform pose) {
  return CameraModel(1000.0, 1000.0, 500.0, 500.0, 1000, 1000, std::move(pose));
}

bool CameraModel::in_bounds(const PixelCoord& p) const noexcept {
  return p.u >= 0.0 && p.v >= 0.0 && p.u < static_cast<double>(width_) &&
         p.v < static_cast<double>(height_);
}

CameraModel CameraModel::moved(const RigidTransform& world_motion) const {
  return CameraModel(fx_, fy_, cx_, cy_, width_, height_,
                     pose_.compose(world_motion.inverse()));
}

Ray Ray::through(const Vec3& origin, const Vec3& direction) {
  const double n = direction.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("Ray", "direction must be a finite non-zero vector");
  }
  return Ray{origin, direction / n};
}

Plane Plane::from_point_normal(const Vec3& point, const Vec3& normal) {
  const double n = normal.norm();
  if (!(n > 0.0)) {
    throw ValidationError("Plane", "normal must be non-zero");
  }
  const Vec3 unit = normal / n;
  return Plane{unit, unit.dot(point)};
}

Plane Plane::transformed(const RigidTransform& motion) const {
  const Vec3 n = motion.rotation * normal;
  return Plane{n, offset + n.dot(motion.translation)};
}

std::optional<PixelCoord> try_project(const CameraModel& camera, const Vec3& point) {
  const Vec3 p = camera.to_camera(point);
  if (p.z() <= kMinDepth) {
    return std::nullopt;
  }
  return PixelCoord{camera.fx() * (p.x() / p.z()) + camera.cx(),
                    camera.fy() * (p.y() / p.z()) + camera.cy()};
}

PixelCoord project(const CameraModel& camera, const Vec3& point) {
  if (auto pixel = try_project(camera, point)) {
    return *pixel;
  }
  throw PointBehindCamera(camera.to_camera(point).z());
}

Ray pixel_ray(const CameraModel& camera, const PixelCoord& pixel) {
  const Vec3 dir_cam((pixel.u - camera.cx()) / camera.fx(), (pixel.v - camera.cy()) / camera.fy(),
                     1.0);
  const Vec3 dir_world = camera.pose().rotation.transpose() * dir_cam;
  return Ray{camera.center(), dir_world.normalized()};
}

std::optional<double> try_ray_plane_parameter(const Ray& ray, const Plane& plane) {
  const double denom = plane.normal.dot(ray.direction);
  if (std::abs(denom) <= kGrazingLimit) {
    return std::nullopt;
  }
  const double t = (plane.offset - plane.normal.dot(ray.origin)) / denom;
  if (!(t > 0.0)) {
    return std::nullopt;
  }
  return t;
}

Vec3 intersect_ray_plane(const Ray& ray, const Plane& plane) {
  const double denom = plane.normal.dot(ray.direction);
  if (std::abs(denom) <= kGrazingLimit) {
    throw RayParallelToPlane();
  }
  const double t = (plane.offset - plane.normal.dot(ray.origin)) / denom;
  if (!(t > 0.0)) {
    throw IntersectionBehindRay(t);
  }
  return ray.at(t);
}

Vec3 triangulate(const CameraModel& camera, const PixelCoord& pixel, const Plane& plane) {
  return intersect_ray_plane(pixel_ray(camera, pixel), plane);
}

std::optional<Vec3> try_triangulate(const CameraModel& camera, const PixelCoord& pixel,
                                    const Plane& plane) {
  const Ray ray = pixel_ray(camera, pixel);
  if (auto t = try_ray_plane_parameter(ray, plane)) {
    return ray.at(*t);
  }
  return std::nullopt;
}

double distance_to_line(const Ray& ray, const Vec3& point) {
  const Vec3 rel = point - ray.origin;
  return (rel - rel.dot(ray.direction) * ray.direction).norm();
}

}  // namespace sectionlab
