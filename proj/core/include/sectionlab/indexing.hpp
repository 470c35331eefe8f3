#pragma once

#include <optional>
#include <vector>

#include "sectionlab/geometry.hpp"
#include "sectionlab/projection.hpp"

namespace sectionlab {

/// Closed u-interval of one line's region on one chip row.
struct RegionInterval {
  double u_min = 0.0;
  double u_max = 0.0;
  int index = 0;

  bool contains(double u) const { return u >= u_min && u <= u_max; }
  double center() const { return 0.5 * (u_min + u_max); }
};

/// Chip partition A_1..A_N. Region n on row r is the image of light plane n
/// clipped to the measurement volume, for all sub-pixel v in [r, r + 1),
/// dilated by the guard margin and clipped to the chip.
class RegionMap {
 public:
  RegionMap(CameraId camera, MeasurementVolume volume, double guard, int num_lines, int width,
            std::vector<std::vector<RegionInterval>> rows);

  CameraId camera() const noexcept { return camera_; }
  const MeasurementVolume& volume() const noexcept { return volume_; }
  double guard() const noexcept { return guard_; }
  int num_lines() const noexcept { return num_lines_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return static_cast<int>(rows_.size()); }

  /// Intervals of one row, sorted by u.
  const std::vector<RegionInterval>& row(int r) const { return rows_.at(static_cast<size_t>(r)); }
  std::optional<RegionInterval> interval(int index, int r) const;

  /// Line index whose region contains `pixel`, if any.
  std::optional<int> lookup(const PixelCoord& pixel) const;

 private:
  CameraId camera_;
  MeasurementVolume volume_;
  double guard_;
  int num_lines_;
  int width_;
  std::vector<std::vector<RegionInterval>> rows_;
};

/// Guard margin used when none is configured: 3 sigma, at least half a pixel.
double default_guard(double noise_sigma);

/// Throws RegionOverlap for the first (row, pair) whose dilated intervals
/// touch, and ValidationError when a line image cannot be expressed as one
/// u-interval per row (plane nearly parallel to the camera x axis).
RegionMap build_region_map(const CameraModel& main_camera, const LineProjector& projector,
                           const MeasurementVolume& volume, double guard);

struct IndexedSignal {
  ChipSignal signal;
  std::optional<int> assigned_index;
};

/// Pure region lookup. Signals from outside the volume can and do receive a
/// wrong index here.
IndexedSignal assign_index(const RegionMap& map, const ChipSignal& signal);

struct EvaluatedPoint {
  Vec3 position = Vec3::Zero();
  int assigned_index = 0;
  IndexedSignal source;
};

/// Triangulates with the assigned plane. Throws UnassignedSignal.
EvaluatedPoint evaluate(const IndexedSignal& indexed, const CameraModel& main_camera,
                        const LineProjector& projector);

struct SweepResult {
  /// Largest N that still builds; 0 when even N = 1 overlaps.
  int max_lines = 0;
  /// First failing N, or nullopt when the limit was reached without overlap.
  std::optional<int> first_overlap;
  int overlap_first_line = 0;
  int overlap_second_line = 0;
  int overlap_row = -1;
};

/// Fan pitch used by the density sweep for N lines over a fixed fan span.
double sweep_pitch(double fan_span, int num_lines);

/// Increases N from 1 with pitch = fan_span / N until build_region_map
/// reports RegionOverlap or `line_limit` is passed.
SweepResult sweep_line_count(const CameraModel& main_camera, const LineProjector& projector,
                             const MeasurementVolume& volume, double guard, double fan_span,
                             int line_limit);

}  // namespace sectionlab
