// Frozen numbers for the reference wall_outside run (6000 samples per line,
// seed 1). They were produced by the simulator and cross-checked against the
// truth audit; a change here means the geometry or the pipeline changed.
#include <gtest/gtest.h>

#include <ostream>

#include "fixtures.hpp"

namespace sectionlab {
namespace {

struct Frozen {
  double sigma;
  std::size_t total, correct, false_count, corrected, deleted, no_candidate, ambiguous;
  std::size_t wrong_index, leakage, false_alarms, corrected_to_truth;
};

void PrintTo(const Frozen& f, std::ostream* os) { *os << "sigma " << f.sigma; }

class ReferenceRun : public ::testing::TestWithParam<Frozen> {};

TEST_P(ReferenceRun, CountsAreFrozen) {
  const Frozen f = GetParam();
  const RunResult r =
      run_pipeline(fixtures::scenario_config(ScenarioName::WallOutside, f.sigma, 6000));
  const auto& s = r.dataset.stats;
  EXPECT_EQ(s.total_points, f.total);
  EXPECT_EQ(s.correct_count, f.correct);
  EXPECT_EQ(s.false_count, f.false_count);
  EXPECT_EQ(s.corrected_count, f.corrected);
  EXPECT_EQ(s.deleted_count, f.deleted);
  EXPECT_EQ(s.deleted_no_candidate, f.no_candidate);
  EXPECT_EQ(s.deleted_ambiguous, f.ambiguous);
  EXPECT_EQ(s.unassigned_signals, 0u);
  EXPECT_EQ(r.audit.wrong_index, f.wrong_index);
  EXPECT_EQ(r.audit.leakage, f.leakage);
  EXPECT_EQ(r.audit.false_alarms, f.false_alarms);
  EXPECT_EQ(r.audit.corrected_to_truth, f.corrected_to_truth);
  EXPECT_EQ(r.audit.corrected_wrongly, 0u);
}

INSTANTIATE_TEST_SUITE_P(
    WallOutside, ReferenceRun,
    ::testing::Values(Frozen{0.0, 53006, 39642, 13364, 12864, 500, 490, 10, 13364, 0, 0, 12864},
                      Frozen{0.1, 53005, 39642, 13363, 12863, 500, 492, 8, 13363, 0, 0, 12863}),
    [](const auto& info) { return info.param.sigma == 0.0 ? "NoiseFree" : "Sigma0p1"; });

TEST(ReferenceSweep, MaximumLineCounts) {
  const SweepReport sweep = run_sweep(default_config());
  ASSERT_EQ(sweep.entries.size(), 4u);
  EXPECT_EQ(sweep.entries[0].result.max_lines, 12);
  EXPECT_EQ(sweep.entries[1].result.max_lines, 24);
  EXPECT_EQ(sweep.entries[2].result.max_lines, 12);
  EXPECT_EQ(sweep.entries[3].result.max_lines, 5);
  // Lowest chip row first, then the left-most pair within it.
  EXPECT_EQ(sweep.entries[0].result.overlap_row, 0);
  EXPECT_EQ(sweep.entries[0].result.overlap_first_line, 6);
  EXPECT_EQ(sweep.entries[0].result.overlap_second_line, 7);
}

}  // namespace
}  // namespace sectionlab
