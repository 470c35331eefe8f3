#include "sectionlab/stereo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "sectionlab/errors.hpp"

namespace sectionlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void MatchTolerance::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("MatchTolerance", "epsilon must be a positive number of pixels");
  }
}

SignalLookup::SignalLookup(const Frame& frame, int chip_width, int chip_height, double cell_size)
    : cell_(cell_size) {
  cols_ = std::max(1, static_cast<int>(std::ceil(chip_width / cell_)));
  rows_ = std::max(1, static_cast<int>(std::ceil(chip_height / cell_)));
  points_.reserve(frame.signals.size());
  for (const auto& s : frame.signals) {
    points_.push_back(s.pixel);
  }
  // Counting sort into cells.
  const std::size_t n_cells = static_cast<std::size_t>(cols_) * static_cast<std::size_t>(rows_);
  std::vector<std::size_t> cell_of(points_.size());
  cell_start_.assign(n_cells + 1, 0);
  for (std::size_t k = 0; k < points_.size(); ++k) {
    cell_of[k] = static_cast<std::size_t>(cell_row(points_[k].v)) * cols_ + cell_col(points_[k].u);
    ++cell_start_[cell_of[k] + 1];
  }
  for (std::size_t c = 0; c < n_cells; ++c) {
    cell_start_[c + 1] += cell_start_[c];
  }
  order_.resize(points_.size());
  std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t k = 0; k < points_.size(); ++k) {
    order_[fill[cell_of[k]]++] = k;
  }
}

int SignalLookup::cell_col(double u) const {
  return std::clamp(static_cast<int>(std::floor(u / cell_)), 0, cols_ - 1);
}

int SignalLookup::cell_row(double v) const {
  return std::clamp(static_cast<int>(std::floor(v / cell_)), 0, rows_ - 1);
}

double SignalLookup::scan_ring(const PixelCoord& q, int col, int row, int ring) const {
  double best = kInf;
  auto scan_cell = [&](int c, int r) {
    if (c < 0 || r < 0 || c >= cols_ || r >= rows_) {
      return;
    }
    const std::size_t cell = static_cast<std::size_t>(r) * cols_ + c;
    for (std::size_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
      best = std::min(best, pixel_distance(q, points_[order_[k]]));
    }
  };
  if (ring == 0) {
    scan_cell(col, row);
    return best;
  }
  for (int c = col - ring; c <= col + ring; ++c) {
    scan_cell(c, row - ring);
    scan_cell(c, row + ring);
  }
  for (int r = row - ring + 1; r <= row + ring - 1; ++r) {
    scan_cell(col - ring, r);
    scan_cell(col + ring, r);
  }
  return best;
}

double SignalLookup::nearest_distance(const PixelCoord& query) const {
  if (points_.empty()) {
    return kInf;
  }
  const int col = cell_col(query.u);
  const int row = cell_row(query.v);
  const int max_ring = std::max(cols_, rows_);
  double best = kInf;
  for (int ring = 0; ring <= max_ring; ++ring) {
    best = std::min(best, scan_ring(query, col, row, ring));
    // Every point outside rings 0..ring is at least ring * cell away.
    if (best <= ring * cell_) {
      break;
    }
  }
  return best;
}

std::optional<double> SignalLookup::nearest_within(const PixelCoord& query, double radius) const {
  if (points_.empty()) {
    return std::nullopt;
  }
  const int col = cell_col(query.u);
  const int row = cell_row(query.v);
  const int max_ring = std::max(cols_, rows_);
  double best = kInf;
  for (int ring = 0; ring <= max_ring; ++ring) {
    best = std::min(best, scan_ring(query, col, row, ring));
    if (best <= ring * cell_ || ring * cell_ > radius) {
      break;
    }
  }
  if (best <= radius) {
    return best;
  }
  return std::nullopt;
}

StereoResult stereo_test(const Vec3& position, const CameraModel& second_camera,
                         const SignalLookup& second_signals, const MatchTolerance& tol) {
  auto pixel = try_project(second_camera, position);
  if (!pixel || !second_camera.in_bounds(*pixel)) {
    return StereoResult{false, kInf};
  }
  const double residual = second_signals.nearest_distance(*pixel);
  return StereoResult{residual <= tol.epsilon, residual};
}

StereoResult stereo_test(const EvaluatedPoint& point, const CameraModel& second_camera,
                         const Frame& second_frame, const MatchTolerance& tol) {
  if (second_frame.signals.empty()) {
    throw Unverifiable();
  }
  const SignalLookup lookup(second_frame, second_camera.width(), second_camera.height());
  return stereo_test(point.position, second_camera, lookup, tol);
}

const char* to_string(DeleteReason reason) {
  switch (reason) {
    case DeleteReason::NoCandidate:
      return "no_candidate";
    case DeleteReason::AmbiguousCandidates:
      return "ambiguous_candidates";
    case DeleteReason::Unverifiable:
      return "unverifiable";
    case DeleteReason::StereoMismatch:
      return "stereo_mismatch";
  }
  return "unknown";
}

VerdictCode verdict_code(const Verdict& v) {
  return std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, verdict::Correct>) {
          return VerdictCode::Correct;
        } else if constexpr (std::is_same_v<T, verdict::FalseIndexed>) {
          return VerdictCode::FalseIndexed;
        } else if constexpr (std::is_same_v<T, verdict::Corrected>) {
          return VerdictCode::Corrected;
        } else if constexpr (std::is_same_v<T, verdict::Deleted>) {
          switch (x.reason) {
            case DeleteReason::StereoMismatch:
              return VerdictCode::DeletedStereoMismatch;
            case DeleteReason::NoCandidate:
              return VerdictCode::DeletedNoCandidate;
            case DeleteReason::AmbiguousCandidates:
              return VerdictCode::DeletedAmbiguous;
            case DeleteReason::Unverifiable:
              break;
          }
          return VerdictCode::DeletedUnverifiable;
        } else {
          return VerdictCode::Unverified;
        }
      },
      v);
}

const char* to_string(VerdictCode code) {
  switch (code) {
    case VerdictCode::Correct:
      return "correct";
    case VerdictCode::FalseIndexed:
      return "false_indexed";
    case VerdictCode::Corrected:
      return "corrected";
    case VerdictCode::DeletedStereoMismatch:
      return "deleted_stereo_mismatch";
    case VerdictCode::DeletedNoCandidate:
      return "deleted_no_candidate";
    case VerdictCode::DeletedAmbiguous:
      return "deleted_ambiguous";
    case VerdictCode::DeletedUnverifiable:
      return "deleted_unverifiable";
    case VerdictCode::Unverified:
      return "unverified";
  }
  return "unknown";
}

bool is_deleted(const Verdict& v) { return std::holds_alternative<verdict::Deleted>(v); }

Verdict correct_point(const IndexedSignal& source, const CameraModel& main_camera,
                      const CameraModel& second_camera, const SignalLookup& second_signals,
                      const LineProjector& projector, const MatchTolerance& tol) {
  const Ray ray = pixel_ray(main_camera, source.signal.pixel);
  std::optional<verdict::Corrected> found;
  int matches = 0;
  for (int n = 1; n <= projector.num_lines(); ++n) {
    const auto t = try_ray_plane_parameter(ray, light_plane(projector, n));
    if (!t) {
      continue;
    }
    const Vec3 candidate = ray.at(*t);
    auto pixel = try_project(second_camera, candidate);
    if (!pixel || !second_camera.in_bounds(*pixel)) {
      continue;
    }
    if (auto residual = second_signals.nearest_within(*pixel, tol.epsilon)) {
      ++matches;
      found = verdict::Corrected{n, candidate, *residual};
    }
  }
  if (matches == 0) {
    return verdict::Deleted{DeleteReason::NoCandidate};
  }
  if (matches > 1) {
    return verdict::Deleted{DeleteReason::AmbiguousCandidates};
  }
  return *found;
}

Verdict correct_point(const IndexedSignal& source, const CameraModel& main_camera,
                      const CameraModel& second_camera, const Frame& second_frame,
                      const LineProjector& projector, const MatchTolerance& tol) {
  const SignalLookup lookup(second_frame, second_camera.width(), second_camera.height());
  return correct_point(source, main_camera, second_camera, lookup, projector, tol);
}

Vec3 VerifiedPoint::final_position() const {
  if (const auto* c = std::get_if<verdict::Corrected>(&verdict)) {
    return c->new_position;
  }
  return source.position;
}

const char* to_string(VerifyMode mode) {
  return mode == VerifyMode::Delete ? "delete" : "correct";
}

void PipelineStats::record_residual(double residual) {
  std::size_t bin = kResidualBinEdges.size();
  for (std::size_t k = 0; k < kResidualBinEdges.size(); ++k) {
    if (residual <= kResidualBinEdges[k]) {
      bin = k;
      break;
    }
  }
  ++residual_histogram[bin];
}

bool PipelineStats::conserved() const {
  return total_points == correct_count + corrected_count + deleted_count + unverified_kept &&
         false_count == total_points - correct_count &&
         deleted_count == deleted_stereo_mismatch + deleted_no_candidate + deleted_ambiguous +
                              deleted_unverifiable;
}

DatasetResult process_dataset(const Frame& main_frame, const Frame& second_frame,
                              const RegionMap& map, const CameraModel& main_camera,
                              const CameraModel& second_camera, const LineProjector& projector,
                              const VerifyOptions& options) {
  if (main_frame.camera != CameraId::Main || second_frame.camera != CameraId::Second) {
    throw ConfigMismatch("frames must be (main, second)");
  }
  if (map.camera() != main_frame.camera) {
    throw ConfigMismatch("region map belongs to the " + std::string(to_string(map.camera())) +
                         " camera");
  }
  if (map.num_lines() != projector.num_lines()) {
    throw ConfigMismatch("region map has " + std::to_string(map.num_lines()) +
                         " lines, projector has " + std::to_string(projector.num_lines()));
  }
  if (map.width() != main_camera.width() || map.height() != main_camera.height()) {
    throw ConfigMismatch("region map chip size differs from the main camera");
  }
  options.tolerance.validate();
  for (const auto* frame : {&main_frame, &second_frame}) {
    for (const auto& s : frame->signals) {
      if (s.camera != frame->camera) {
        throw ConfigMismatch("frame contains a signal from another camera");
      }
    }
  }

  const SignalLookup lookup(second_frame, second_camera.width(), second_camera.height());
  const bool verifiable = !lookup.empty();

  DatasetResult out;
  PipelineStats& stats = out.stats;
  stats.main_signals = main_frame.signals.size();
  out.points.reserve(main_frame.signals.size());

  for (const auto& signal : main_frame.signals) {
    IndexedSignal indexed = assign_index(map, signal);
    if (!indexed.assigned_index) {
      ++stats.unassigned_signals;
      continue;
    }
    VerifiedPoint vp{evaluate(indexed, main_camera, projector), verdict::Correct{}, 0.0};
    ++stats.total_points;

    if (!verifiable) {
      vp.residual = kInf;
      ++stats.false_count;
      if (options.keep_unverified) {
        vp.verdict = verdict::Unverified{};
        ++stats.unverified_kept;
      } else {
        vp.verdict = verdict::Deleted{DeleteReason::Unverifiable};
        ++stats.deleted_count;
        ++stats.deleted_unverifiable;
      }
      stats.record_residual(vp.residual);
      out.points.push_back(std::move(vp));
      continue;
    }

    const StereoResult check = stereo_test(vp.source.position, second_camera, lookup,
                                           options.tolerance);
    vp.residual = check.residual;
    stats.record_residual(check.residual);
    if (check.passes) {
      ++stats.correct_count;
      out.points.push_back(std::move(vp));
      continue;
    }
    ++stats.false_count;
    if (options.mode == VerifyMode::Delete) {
      vp.verdict = verdict::Deleted{DeleteReason::StereoMismatch};
    } else {
      vp.verdict = correct_point(indexed, main_camera, second_camera, lookup, projector,
                                 options.tolerance);
    }
    if (const auto* d = std::get_if<verdict::Deleted>(&vp.verdict)) {
      ++stats.deleted_count;
      switch (d->reason) {
        case DeleteReason::StereoMismatch:
          ++stats.deleted_stereo_mismatch;
          break;
        case DeleteReason::AmbiguousCandidates:
          ++stats.deleted_ambiguous;
          break;
        default:
          ++stats.deleted_no_candidate;
          break;
      }
    } else {
      ++stats.corrected_count;
    }
    out.points.push_back(std::move(vp));
  }
  return out;
}

double TruthAudit::recall() const {
  return wrong_index == 0 ? 1.0 : static_cast<double>(wrong_detected) / wrong_index;
}

double TruthAudit::false_alarm_rate() const {
  return right_index_both_visible == 0
             ? 0.0
             : static_cast<double>(false_alarms) / right_index_both_visible;
}

TruthAudit audit_against_truth(const std::vector<VerifiedPoint>& points,
                               const Frame& second_frame) {
  std::set<std::pair<int, int>> seen_by_second;
  for (const auto& s : second_frame.signals) {
    seen_by_second.emplace(s.truth_index, s.sample_index);
  }
  TruthAudit audit;
  for (const auto& p : points) {
    const ChipSignal& truth = p.source.source.signal;
    const bool wrong = p.source.assigned_index != truth.truth_index;
    const bool passed = std::holds_alternative<verdict::Correct>(p.verdict);
    if (wrong) {
      ++audit.wrong_index;
      if (passed) {
        ++audit.leakage;
      } else if (!std::holds_alternative<verdict::Unverified>(p.verdict)) {
        ++audit.wrong_detected;
      }
      if (is_deleted(p.verdict)) {
        ++audit.wrong_deleted;
      }
    } else {
      ++audit.right_index;
      if (seen_by_second.count({truth.truth_index, truth.sample_index}) != 0) {
        ++audit.right_index_both_visible;
        if (!passed) {
          ++audit.false_alarms;
        }
      }
    }
    if (const auto* c = std::get_if<verdict::Corrected>(&p.verdict)) {
      if (c->new_index == truth.truth_index) {
        ++audit.corrected_to_truth;
        audit.max_corrected_error_mm =
            std::max(audit.max_corrected_error_mm, (c->new_position - truth.truth_point).norm());
      } else {
        ++audit.corrected_wrongly;
      }
    }
  }
  return audit;
}

}  // namespace sectionlab
