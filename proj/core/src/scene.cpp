#include "sectionlab/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sectionlab/errors.hpp"

namespace sectionlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int axis_index(Axis a) { return static_cast<int>(a); }

/// The two coordinates spanned by an axis plane, ascending.
std::array<int, 2> plane_coordinates(Axis a) {
  switch (a) {
    case Axis::X:
      return {1, 2};
    case Axis::Y:
      return {0, 2};
    case Axis::Z:
      break;
  }
  return {0, 1};
}

std::optional<Hit> hit_sphere(const Sphere& s, const Ray& ray) {
  const Vec3 oc = ray.origin - s.center;
  const double b = oc.dot(ray.direction);
  const double c = oc.squaredNorm() - s.radius * s.radius;
  const double disc = b * b - c;
  if (disc < 0.0) {
    return std::nullopt;
  }
  const double root = std::sqrt(disc);
  // q form keeps the small root accurate when |b| >> root.
  const double q = (b > 0.0) ? -(b + root) : -(b - root);
  double t0 = q;
  double t1 = (q != 0.0) ? c / q : -b;
  if (t0 > t1) {
    std::swap(t0, t1);
  }
  double t = t0 > kMinHitDistance ? t0 : t1;
  if (!(t > kMinHitDistance)) {
    return std::nullopt;
  }
  return Hit{ray.at(t), 0, t};
}

std::optional<Hit> hit_axis_plane(const AxisPlane& p, const Ray& ray) {
  const int a = axis_index(p.axis);
  const double denom = ray.direction[a];
  if (std::abs(denom) <= kGrazingLimit) {
    return std::nullopt;
  }
  const double t = (p.offset - ray.origin[a]) / denom;
  if (!(t > kMinHitDistance)) {
    return std::nullopt;
  }
  Vec3 point = ray.at(t);
  point[a] = p.offset;
  const auto [c0, c1] = plane_coordinates(p.axis);
  if (point[c0] < p.lower[0] || point[c0] > p.upper[0] || point[c1] < p.lower[1] ||
      point[c1] > p.upper[1]) {
    return std::nullopt;
  }
  return Hit{point, 0, t};
}

/// Smallest root of a t^2 + b t + c = 0 inside [lo, hi], if any.
std::optional<double> smallest_root_in(double a, double b, double c, double lo, double hi) {
  std::array<double, 2> roots{kInf, kInf};
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) {
    return std::nullopt;
  }
  if (std::abs(a) <= 1e-14 * scale) {
    if (b == 0.0) {
      return std::nullopt;
    }
    roots[0] = -c / b;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
      return std::nullopt;
    }
    const double root = std::sqrt(disc);
    const double q = -0.5 * (b + (b >= 0.0 ? root : -root));
    roots[0] = q / a;
    roots[1] = (q != 0.0) ? c / q : roots[0];
  }
  std::sort(roots.begin(), roots.end());
  for (double r : roots) {
    if (r >= lo && r <= hi) {
      return r;
    }
  }
  return std::nullopt;
}

/// Parameter interval of the ray inside [lo, hi] along one coordinate.
bool clip_slab(double origin, double dir, double lo, double hi, double& t_near, double& t_far) {
  if (std::abs(dir) < 1e-300) {
    return origin >= lo && origin <= hi;
  }
  double t0 = (lo - origin) / dir;
  double t1 = (hi - origin) / dir;
  if (t0 > t1) {
    std::swap(t0, t1);
  }
  t_near = std::max(t_near, t0);
  t_far = std::min(t_far, t1);
  return t_near <= t_far;
}

/// Ray against the bilinear patch of cell (i, j), restricted to [t_enter, t_exit].
std::optional<double> hit_cell(const Heightfield& hf, int i, int j, const Ray& ray, double t_enter,
                               double t_exit) {
  const double dx = hf.cell_width();
  const double dy = hf.cell_height();
  const double h00 = hf.height_at(i, j);
  const double h10 = hf.height_at(i + 1, j);
  const double h01 = hf.height_at(i, j + 1);
  const double h11 = hf.height_at(i + 1, j + 1);

  // Quick reject on the height range the ray spans inside the cell.
  const double z_a = ray.origin.z() + t_enter * ray.direction.z();
  const double z_b = ray.origin.z() + t_exit * ray.direction.z();
  const double h_lo = std::min({h00, h10, h01, h11});
  const double h_hi = std::max({h00, h10, h01, h11});
  if (std::max(z_a, z_b) < h_lo - 1e-9 || std::min(z_a, z_b) > h_hi + 1e-9) {
    return std::nullopt;
  }

  // Work relative to the cell entry point for conditioning.
  const Vec3 o = ray.at(t_enter);
  const Vec3& d = ray.direction;
  const double s0 = (o.x() - (hf.x_min + i * dx)) / dx;
  const double s1 = d.x() / dx;
  const double r0 = (o.y() - (hf.y_min + j * dy)) / dy;
  const double r1 = d.y() / dy;

  const double a = h00;
  const double b = h10 - h00;
  const double c = h01 - h00;
  const double e = h11 - h10 - h01 + h00;

  const double k0 = a + b * s0 + c * r0 + e * s0 * r0;
  const double k1 = b * s1 + c * r1 + e * (s0 * r1 + s1 * r0);
  const double k2 = e * s1 * r1;

  // o.z + t d.z - (k0 + k1 t + k2 t^2) = 0
  const double span = t_exit - t_enter;
  const double slack = 1e-9 * std::max(1.0, span);
  auto root = smallest_root_in(-k2, d.z() - k1, o.z() - k0, -slack, span + slack);
  if (!root) {
    return std::nullopt;
  }
  // One Newton polish step on the exact residual.
  double t = *root;
  const double f = o.z() + t * d.z() - (k0 + k1 * t + k2 * t * t);
  const double df = d.z() - (k1 + 2.0 * k2 * t);
  if (std::abs(df) > 1e-12) {
    t -= f / df;
  }
  return t_enter + t;
}

std::optional<Hit> hit_heightfield(const Heightfield& hf, const Ray& ray) {
  double t_near = kMinHitDistance;
  double t_far = kInf;
  if (!clip_slab(ray.origin.x(), ray.direction.x(), hf.x_min, hf.x_max, t_near, t_far) ||
      !clip_slab(ray.origin.y(), ray.direction.y(), hf.y_min, hf.y_max, t_near, t_far)) {
    return std::nullopt;
  }
  if (!std::isfinite(t_far)) {
    // Vertical ray inside the rectangle: one cell, bounded by the height range.
    const double h_lo = *std::min_element(hf.heights.begin(), hf.heights.end());
    const double h_hi = *std::max_element(hf.heights.begin(), hf.heights.end());
    const double dz = ray.direction.z();
    if (std::abs(dz) < 1e-300) {
      return std::nullopt;
    }
    double t0 = (h_lo - 1.0 - ray.origin.z()) / dz;
    double t1 = (h_hi + 1.0 - ray.origin.z()) / dz;
    if (t0 > t1) {
      std::swap(t0, t1);
    }
    t_near = std::max(t_near, t0);
    t_far = t1;
    if (t_near > t_far) {
      return std::nullopt;
    }
  }

  const double dx = hf.cell_width();
  const double dy = hf.cell_height();
  const Vec3 start = ray.at(t_near);
  int i = std::clamp(static_cast<int>(std::floor((start.x() - hf.x_min) / dx)), 0, hf.cols - 2);
  int j = std::clamp(static_cast<int>(std::floor((start.y() - hf.y_min) / dy)), 0, hf.rows - 2);

  const double ddx = ray.direction.x();
  const double ddy = ray.direction.y();
  const int step_i = ddx > 0.0 ? 1 : (ddx < 0.0 ? -1 : 0);
  const int step_j = ddy > 0.0 ? 1 : (ddy < 0.0 ? -1 : 0);
  auto boundary_t = [&](int cell, int step, double lo, double size, double origin, double dir) {
    if (step == 0) {
      return kInf;
    }
    const double edge = lo + (cell + (step > 0 ? 1 : 0)) * size;
    return (edge - origin) / dir;
  };
  double t_max_i = boundary_t(i, step_i, hf.x_min, dx, ray.origin.x(), ddx);
  double t_max_j = boundary_t(j, step_j, hf.y_min, dy, ray.origin.y(), ddy);
  const double t_delta_i = step_i != 0 ? dx / std::abs(ddx) : kInf;
  const double t_delta_j = step_j != 0 ? dy / std::abs(ddy) : kInf;

  double t_enter = t_near;
  while (t_enter <= t_far) {
    const double t_exit = std::min({t_max_i, t_max_j, t_far});
    if (auto t = hit_cell(hf, i, j, ray, t_enter, t_exit); t && *t > kMinHitDistance) {
      Vec3 point = ray.at(*t);
      point.x() = std::clamp(point.x(), hf.x_min, hf.x_max);
      point.y() = std::clamp(point.y(), hf.y_min, hf.y_max);
      return Hit{point, 0, *t};
    }
    if (t_exit >= t_far) {
      break;
    }
    if (t_max_i < t_max_j) {
      i += step_i;
      t_enter = t_max_i;
      t_max_i += t_delta_i;
    } else {
      j += step_j;
      t_enter = t_max_j;
      t_max_j += t_delta_j;
    }
    if (i < 0 || j < 0 || i > hf.cols - 2 || j > hf.rows - 2) {
      break;
    }
  }
  return std::nullopt;
}

// Möller-Trumbore.
std::optional<double> hit_triangle(const Vec3& a, const Vec3& b, const Vec3& c, const Ray& ray) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = ray.direction.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < 1e-14) {
    return std::nullopt;
  }
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) {
    return std::nullopt;
  }
  const Vec3 q = s.cross(e1);
  const double v = ray.direction.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) {
    return std::nullopt;
  }
  const double t = e2.dot(q) * inv;
  if (!(t > kMinHitDistance)) {
    return std::nullopt;
  }
  return t;
}

std::optional<Hit> hit_mesh(const TriangleMesh& mesh, const Ray& ray) {
  double best = kInf;
  for (const auto& tri : mesh.triangles) {
    if (auto t = hit_triangle(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                              mesh.vertices[tri[2]], ray);
        t && *t < best) {
      best = *t;
    }
  }
  if (!std::isfinite(best)) {
    return std::nullopt;
  }
  return Hit{ray.at(best), 0, best};
}

// Closest point on triangle (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace

double Heightfield::sample(double x, double y) const {
  const double dx = cell_width();
  const double dy = cell_height();
  const int i = std::clamp(static_cast<int>(std::floor((x - x_min) / dx)), 0, cols - 2);
  const int j = std::clamp(static_cast<int>(std::floor((y - y_min) / dy)), 0, rows - 2);
  const double s = (x - (x_min + i * dx)) / dx;
  const double r = (y - (y_min + j * dy)) / dy;
  return height_at(i, j) * (1 - s) * (1 - r) + height_at(i + 1, j) * s * (1 - r) +
         height_at(i, j + 1) * (1 - s) * r + height_at(i + 1, j + 1) * s * r;
}

void validate_surface(const Surface& surface) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          if (!(s.radius > 0.0)) {
            throw ValidationError("Sphere", "radius must be positive");
          }
        } else if constexpr (std::is_same_v<T, AxisPlane>) {
          if (!(s.lower[0] < s.upper[0]) || !(s.lower[1] < s.upper[1])) {
            throw ValidationError("AxisPlane", "extents must satisfy lower < upper");
          }
        } else if constexpr (std::is_same_v<T, Heightfield>) {
          if (s.cols < 2 || s.rows < 2) {
            throw ValidationError("Heightfield", "grid must be at least 2x2");
          }
          if (s.heights.size() != static_cast<size_t>(s.cols) * static_cast<size_t>(s.rows)) {
            throw ValidationError("Heightfield", "height count does not match grid size");
          }
          if (!(s.x_min < s.x_max) || !(s.y_min < s.y_max)) {
            throw ValidationError("Heightfield", "rectangle must satisfy min < max");
          }
        } else {
          const int n = static_cast<int>(s.vertices.size());
          for (const auto& tri : s.triangles) {
            for (int idx : tri) {
              if (idx < 0 || idx >= n) {
                throw ValidationError("TriangleMesh", "triangle references a missing vertex");
              }
            }
          }
        }
      },
      surface);
}

Scene::Scene(std::vector<Surface> objects) : objects_(std::move(objects)) {
  for (const auto& s : objects_) {
    validate_surface(s);
  }
}

int Scene::add(Surface surface) {
  validate_surface(surface);
  objects_.push_back(std::move(surface));
  return static_cast<int>(objects_.size()) - 1;
}

std::optional<Hit> intersect_surface(const Surface& surface, const Ray& ray, int surface_id) {
  std::optional<Hit> hit = std::visit(
      [&](const auto& s) -> std::optional<Hit> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          return hit_sphere(s, ray);
        } else if constexpr (std::is_same_v<T, AxisPlane>) {
          return hit_axis_plane(s, ray);
        } else if constexpr (std::is_same_v<T, Heightfield>) {
          return hit_heightfield(s, ray);
        } else {
          return hit_mesh(s, ray);
        }
      },
      surface);
  if (hit) {
    hit->surface_id = surface_id;
  }
  return hit;
}

std::optional<Hit> intersect_scene(const Scene& scene, const Ray& ray) {
  std::optional<Hit> best;
  const auto& objects = scene.objects();
  for (size_t k = 0; k < objects.size(); ++k) {
    auto hit = intersect_surface(objects[k], ray, static_cast<int>(k));
    if (hit && (!best || hit->t < best->t)) {
      best = hit;
    }
  }
  return best;
}

double surface_residual(const Surface& surface, const Vec3& point) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          return std::abs((point - s.center).norm() - s.radius);
        } else if constexpr (std::is_same_v<T, AxisPlane>) {
          return std::abs(point[axis_index(s.axis)] - s.offset);
        } else if constexpr (std::is_same_v<T, Heightfield>) {
          return std::abs(point.z() - s.sample(point.x(), point.y()));
        } else {
          double best = kInf;
          for (const auto& tri : s.triangles) {
            const Vec3 q = closest_on_triangle(point, s.vertices[tri[0]], s.vertices[tri[1]],
                                               s.vertices[tri[2]]);
            best = std::min(best, (q - point).norm());
          }
          return best;
        }
      },
      surface);
}

}  // namespace sectionlab
