#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "sectionlab/geometry.hpp"

namespace sectionlab {

/// Rays closer than this to their origin are ignored (self-intersection guard).
inline constexpr double kMinHitDistance = 1e-9;

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Axis-aligned rectangle `coordinate[axis] = offset`. The extents bound the
/// two remaining coordinates in ascending axis order (x,y for Z; x,z for Y; y,z for X).
struct AxisPlane {
  Axis axis = Axis::Z;
  double offset = 0.0;
  std::array<double, 2> lower{-1.0, -1.0};
  std::array<double, 2> upper{1.0, 1.0};
};

/// z = h(x, y) over [x_min, x_max] x [y_min, y_max], bilinear between samples.
/// Heights are stored row-major: heights[j * cols + i] sits at
/// (x_min + i * dx, y_min + j * dy).
struct Heightfield {
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  int cols = 2;
  int rows = 2;
  std::vector<double> heights;

  double cell_width() const { return (x_max - x_min) / (cols - 1); }
  double cell_height() const { return (y_max - y_min) / (rows - 1); }
  double height_at(int i, int j) const { return heights[static_cast<size_t>(j) * cols + i]; }
  /// Bilinear height; requires (x, y) inside the rectangle.
  double sample(double x, double y) const;
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

using Surface = std::variant<Sphere, AxisPlane, Heightfield, TriangleMesh>;

/// Throws ValidationError for a non-positive radius, an inverted rectangle,
/// a heightfield below 2x2 or a mesh with out-of-range vertex indices.
void validate_surface(const Surface& surface);

struct Hit {
  Vec3 point;
  int surface_id = -1;
  double t = 0.0;
};

class Scene {
 public:
  Scene() = default;
  explicit Scene(std::vector<Surface> objects);

  int add(Surface surface);
  const std::vector<Surface>& objects() const noexcept { return objects_; }
  bool empty() const noexcept { return objects_.empty(); }

 private:
  std::vector<Surface> objects_;
};

/// Nearest hit with t > kMinHitDistance on one surface.
std::optional<Hit> intersect_surface(const Surface& surface, const Ray& ray, int surface_id = 0);

/// Nearest hit across all surfaces; nullopt is a miss.
std::optional<Hit> intersect_scene(const Scene& scene, const Ray& ray);

/// Surface equation residual in millimetres: zero for points on the surface.
double surface_residual(const Surface& surface, const Vec3& point);

}  // namespace sectionlab
