#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "sectionlab/indexing.hpp"

namespace sectionlab {

/// Maximum pixel distance between a back-projection and an observed signal
/// for the two to count as a match.
struct MatchTolerance {
  double epsilon = 1.0;

  /// Throws ValidationError unless epsilon > 0.
  void validate() const;
  /// Tolerances below twice the noise scale reject many correct points.
  bool below_noise_scale(double noise_sigma) const { return epsilon < 2.0 * noise_sigma; }
};

/// Bucketed nearest-signal search over one frame's pixel positions.
class SignalLookup {
 public:
  SignalLookup(const Frame& frame, int chip_width, int chip_height, double cell_size = 4.0);

  bool empty() const noexcept { return points_.empty(); }
  std::size_t size() const noexcept { return points_.size(); }
  /// Exact Euclidean distance to the nearest signal; +inf when empty.
  double nearest_distance(const PixelCoord& query) const;
  /// Nearest distance if it is <= radius, otherwise nullopt. Cheaper than
  /// nearest_distance for far queries.
  std::optional<double> nearest_within(const PixelCoord& query, double radius) const;

 private:
  double cell_;
  int cols_;
  int rows_;
  std::vector<PixelCoord> points_;
  std::vector<std::size_t> cell_start_;  // CSR offsets, size cols*rows + 1
  std::vector<std::size_t> order_;

  int cell_col(double u) const;
  int cell_row(double v) const;
  /// Smallest distance among points in cells at Chebyshev ring `ring` around (col, row).
  double scan_ring(const PixelCoord& q, int col, int row, int ring) const;
};

struct StereoResult {
  bool passes = false;
  double residual = 0.0;
};

/// Back-projects the evaluated point into the second camera and measures
/// the distance to the nearest observed signal. Off-chip or behind-camera
/// back-projections fail with an infinite residual.
StereoResult stereo_test(const Vec3& position, const CameraModel& second_camera,
                         const SignalLookup& second_signals, const MatchTolerance& tol);

/// Convenience form over a whole frame. Throws Unverifiable on an empty frame.
StereoResult stereo_test(const EvaluatedPoint& point, const CameraModel& second_camera,
                         const Frame& second_frame, const MatchTolerance& tol);

/// StereoMismatch is the delete-mode reason: the point failed the stereo
/// test and no correction was attempted.
enum class DeleteReason { StereoMismatch, NoCandidate, AmbiguousCandidates, Unverifiable };

const char* to_string(DeleteReason reason);

namespace verdict {
struct Correct {};
/// Failed the stereo test; the intermediate state before delete/correct handling.
struct FalseIndexed {};
struct Corrected {
  int new_index = 0;
  Vec3 new_position = Vec3::Zero();
  double new_residual = 0.0;
};
struct Deleted {
  DeleteReason reason = DeleteReason::NoCandidate;
};
/// Could not be checked (empty second frame) and was kept on request.
struct Unverified {};
}  // namespace verdict

using Verdict = std::variant<verdict::Correct, verdict::FalseIndexed, verdict::Corrected,
                             verdict::Deleted, verdict::Unverified>;

/// Stable numeric code written to point-cloud files.
enum class VerdictCode : int {
  Correct = 0,
  FalseIndexed = 1,
  Corrected = 2,
  DeletedStereoMismatch = 3,
  DeletedNoCandidate = 4,
  DeletedAmbiguous = 5,
  DeletedUnverifiable = 6,
  Unverified = 7,
};

VerdictCode verdict_code(const Verdict& v);
const char* to_string(VerdictCode code);
bool is_deleted(const Verdict& v);

/// Re-triangulates a failed signal under every index 1..N and keeps the
/// unique candidate whose back-projection matches the second frame.
Verdict correct_point(const IndexedSignal& source, const CameraModel& main_camera,
                      const CameraModel& second_camera, const SignalLookup& second_signals,
                      const LineProjector& projector, const MatchTolerance& tol);

Verdict correct_point(const IndexedSignal& source, const CameraModel& main_camera,
                      const CameraModel& second_camera, const Frame& second_frame,
                      const LineProjector& projector, const MatchTolerance& tol);

struct VerifiedPoint {
  EvaluatedPoint source;
  Verdict verdict;
  /// Stereo residual of the originally evaluated position, pixels.
  double residual = 0.0;

  /// Position after handling: the corrected position for corrected points.
  Vec3 final_position() const;
};

enum class VerifyMode { Delete, Correct };

const char* to_string(VerifyMode mode);

/// Residual histogram bin upper edges in pixels; the final bin is open.
inline constexpr std::array<double, 10> kResidualBinEdges{0.01, 0.1, 0.25, 0.5, 1.0,
                                                          2.0,  5.0, 10.0, 50.0, 200.0};

struct PipelineStats {
  std::size_t main_signals = 0;
  std::size_t unassigned_signals = 0;
  std::size_t total_points = 0;
  std::size_t correct_count = 0;
  std::size_t false_count = 0;
  std::size_t corrected_count = 0;
  std::size_t deleted_count = 0;
  std::size_t deleted_stereo_mismatch = 0;
  std::size_t deleted_no_candidate = 0;
  std::size_t deleted_ambiguous = 0;
  std::size_t deleted_unverifiable = 0;
  std::size_t unverified_kept = 0;
  /// Counts per bin; bin k holds residuals <= kResidualBinEdges[k], the
  /// last bin everything larger (including +inf).
  std::array<std::size_t, kResidualBinEdges.size() + 1> residual_histogram{};

  void record_residual(double residual);
  /// total = correct + corrected + deleted + unverified_kept.
  bool conserved() const;
};

struct VerifyOptions {
  VerifyMode mode = VerifyMode::Correct;
  MatchTolerance tolerance;
  bool keep_unverified = false;
};

struct DatasetResult {
  std::vector<VerifiedPoint> points;
  PipelineStats stats;
};

/// assign -> evaluate -> stereo test -> delete or correct, for every main
/// signal. Throws ConfigMismatch on inconsistent camera ids or line counts.
DatasetResult process_dataset(const Frame& main_frame, const Frame& second_frame,
                              const RegionMap& map, const CameraModel& main_camera,
                              const CameraModel& second_camera, const LineProjector& projector,
                              const VerifyOptions& options);

/// Ground-truth audit of a verified dataset; reads the simulator truth the
/// pipeline itself never sees.
struct TruthAudit {
  std::size_t wrong_index = 0;          // assigned != truth
  std::size_t wrong_detected = 0;       // wrong and failed the stereo test
  std::size_t leakage = 0;              // wrong but verdict Correct
  std::size_t right_index = 0;
  std::size_t right_index_both_visible = 0;  // right and observed by the second camera
  std::size_t false_alarms = 0;         // right, both-visible, but failed the stereo test
  std::size_t corrected_to_truth = 0;   // Corrected with new_index == truth
  std::size_t corrected_wrongly = 0;    // Corrected with new_index != truth
  std::size_t wrong_deleted = 0;        // wrong and Deleted
  double max_corrected_error_mm = 0.0;  // max |new_position - truth_point| over corrected_to_truth

  double recall() const;
  double false_alarm_rate() const;
};

/// `second_frame` decides which points were visible to both cameras.
TruthAudit audit_against_truth(const std::vector<VerifiedPoint>& points, const Frame& second_frame);

}  // namespace sectionlab
