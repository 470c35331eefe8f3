#include "sectionlab/indexing.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "sectionlab/errors.hpp"

namespace sectionlab {

RegionMap::RegionMap(CameraId camera, MeasurementVolume volume, double guard, int num_lines,
                     int width, std::vector<std::vector<RegionInterval>> rows)
    : camera_(camera),
      volume_(volume),
      guard_(guard),
      num_lines_(num_lines),
      width_(width),
      rows_(std::move(rows)) {}

std::optional<RegionInterval> RegionMap::interval(int index, int r) const {
  if (r < 0 || r >= height()) {
    return std::nullopt;
  }
  for (const auto& iv : rows_[static_cast<size_t>(r)]) {
    if (iv.index == index) {
      return iv;
    }
  }
  return std::nullopt;
}

std::optional<int> RegionMap::lookup(const PixelCoord& pixel) const {
  if (!(pixel.v >= 0.0) || !(pixel.v < static_cast<double>(height()))) {
    return std::nullopt;
  }
  const auto& intervals = rows_[static_cast<size_t>(std::floor(pixel.v))];
  // Intervals are disjoint by construction; the nearer-centre rule (lower
  // index on exact ties) only matters for hand-built maps.
  std::optional<RegionInterval> best;
  for (const auto& iv : intervals) {
    if (!iv.contains(pixel.u)) {
      continue;
    }
    if (!best) {
      best = iv;
      continue;
    }
    const double d_new = std::abs(pixel.u - iv.center());
    const double d_old = std::abs(pixel.u - best->center());
    if (d_new < d_old || (d_new == d_old && iv.index < best->index)) {
      best = iv;
    }
  }
  if (!best) {
    return std::nullopt;
  }
  return best->index;
}

double default_guard(double noise_sigma) { return std::max(3.0 * noise_sigma, 0.5); }

RegionMap build_region_map(const CameraModel& main_camera, const LineProjector& projector,
                           const MeasurementVolume& volume, double guard) {
  volume.validate();
  if (!(guard >= 0.0)) {
    throw ValidationError("RegionMap", "guard margin must be non-negative");
  }
  const int n_lines = projector.num_lines();
  const int width = main_camera.width();
  const int height = main_camera.height();
  const double fx = main_camera.fx();
  const double fy = main_camera.fy();
  const double cx = main_camera.cx();
  const double cy = main_camera.cy();

  std::vector<std::vector<RegionInterval>> rows(static_cast<size_t>(height));

  for (int n = 1; n <= n_lines; ++n) {
    const Plane cam_plane = light_plane(projector, n).transformed(main_camera.pose());
    const Vec3& nc = cam_plane.normal;
    // Within the plane, at camera depth z and on the viewing rows through v:
    //   u(z, v) = fx / nx * (d / z - ny (v - cy) / fy - nz) + cx,
    // separable in z and v, so the extremes over a row sit at the corners.
    if (std::abs(nc.x()) < 1e-9) {
      throw ValidationError("RegionMap", "light plane " + std::to_string(n) +
                                             " is parallel to the camera x axis");
    }
    auto u_at = [&](double z, double v) {
      return fx / nc.x() * (cam_plane.offset / z - nc.y() * (v - cy) / fy - nc.z()) + cx;
    };
    for (int r = 0; r < height; ++r) {
      const std::array<double, 4> corners{u_at(volume.z_min, r), u_at(volume.z_max, r),
                                          u_at(volume.z_min, r + 1.0),
                                          u_at(volume.z_max, r + 1.0)};
      double lo = *std::min_element(corners.begin(), corners.end()) - guard;
      double hi = *std::max_element(corners.begin(), corners.end()) + guard;
      lo = std::max(lo, 0.0);
      hi = std::min(hi, static_cast<double>(width));
      if (lo > hi) {
        continue;
      }
      rows[static_cast<size_t>(r)].push_back(RegionInterval{lo, hi, n});
    }
  }

  for (int r = 0; r < height; ++r) {
    auto& row = rows[static_cast<size_t>(r)];
    std::sort(row.begin(), row.end(), [](const RegionInterval& a, const RegionInterval& b) {
      return a.u_min < b.u_min || (a.u_min == b.u_min && a.index < b.index);
    });
    for (size_t k = 1; k < row.size(); ++k) {
      if (row[k].u_min <= row[k - 1].u_max) {
        throw RegionOverlap(std::min(row[k - 1].index, row[k].index),
                            std::max(row[k - 1].index, row[k].index), r);
      }
    }
  }
  return RegionMap(CameraId::Main, volume, guard, n_lines, width, std::move(rows));
}

IndexedSignal assign_index(const RegionMap& map, const ChipSignal& signal) {
  return IndexedSignal{signal, map.lookup(signal.pixel)};
}

EvaluatedPoint evaluate(const IndexedSignal& indexed, const CameraModel& main_camera,
                        const LineProjector& projector) {
  if (!indexed.assigned_index) {
    throw UnassignedSignal();
  }
  const int n = *indexed.assigned_index;
  return EvaluatedPoint{triangulate(main_camera, indexed.signal.pixel, light_plane(projector, n)),
                        n, indexed};
}

double sweep_pitch(double fan_span, int num_lines) {
  if (num_lines < 1 || !(fan_span > 0.0)) {
    throw ValidationError("LineProjector", "sweep needs a positive fan span and line count");
  }
  return fan_span / num_lines;
}

SweepResult sweep_line_count(const CameraModel& main_camera, const LineProjector& projector,
                             const MeasurementVolume& volume, double guard, double fan_span,
                             int line_limit) {
  SweepResult result;
  for (int n = 1; n <= line_limit; ++n) {
    const LineProjector candidate = projector.with_lines(n, sweep_pitch(fan_span, n));
    try {
      build_region_map(main_camera, candidate, volume, guard);
      result.max_lines = n;
    } catch (const RegionOverlap& overlap) {
      result.first_overlap = n;
      result.overlap_first_line = overlap.first();
      result.overlap_second_line = overlap.second();
      result.overlap_row = overlap.row();
      break;
    }
  }
  return result;
}

}  // namespace sectionlab
