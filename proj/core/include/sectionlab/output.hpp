#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sectionlab/pipeline.hpp"

namespace sectionlab {

/// raw: every evaluated point at its evaluated position.
/// cleaned: deleted points removed, corrected points at their new position.
/// corrected: only the corrected points, at their new position.
enum class CloudVariant { Raw, Cleaned, Corrected };

const char* to_string(CloudVariant variant);

/// One vertex as written: position, verdict code, line index, residual.
struct CloudRecord {
  Vec3 position = Vec3::Zero();
  int verdict = 0;
  int index = 0;
  double residual = 0.0;
};

std::vector<CloudRecord> select_cloud(const std::vector<VerifiedPoint>& points,
                                      CloudVariant variant);

/// ASCII PLY, 9 significant digits, LF endings.
std::string format_point_cloud(const std::vector<VerifiedPoint>& points, CloudVariant variant);
void write_point_cloud(const std::vector<VerifiedPoint>& points, const std::string& path,
                       CloudVariant variant);

/// Reads files produced by write_point_cloud. Throws ParseError.
std::vector<CloudRecord> parse_point_cloud(const std::string& text);
std::vector<CloudRecord> read_point_cloud(const std::string& path);

struct StatsReport {
  PipelineStats stats;
  std::optional<TruthAudit> audit;
  std::optional<SweepReport> sweep;
  std::optional<RunConfig> config;
};

std::string format_stats(const StatsReport& report);
void write_stats(const StatsReport& report, const std::string& path);

/// Writes raw.ply, cleaned.ply, corrected.ply and stats.yaml into `dir`.
void write_run_outputs(const RunResult& result, const std::string& dir);

/// Writes via a temporary file and rename. Throws IoError.
void write_file_atomically(const std::string& path, const std::string& contents);

}  // namespace sectionlab
