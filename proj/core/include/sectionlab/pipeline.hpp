#pragma once

#include <optional>
#include <vector>

#include "sectionlab/config.hpp"

namespace sectionlab {

struct RunResult {
  RunConfig config;
  Frame main_frame;
  Frame second_frame;
  DatasetResult dataset;
  TruthAudit audit;
};

/// Renders both frames and runs the verification pipeline. Deterministic in
/// (config, seed). Errors from the modules propagate with their category.
RunResult run_pipeline(const RunConfig& config);

struct SweepEntry {
  MeasurementVolume volume;
  SweepResult result;
};

struct SweepReport {
  double fan_span_deg = 0.0;
  double guard = 0.0;
  std::vector<SweepEntry> entries;  // configured volume first
};

/// Density sweep on the configured volume, then on each extra depth width
/// centred on the same mid-depth.
SweepReport run_sweep(const RunConfig& config);

}  // namespace sectionlab
