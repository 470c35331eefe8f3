#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sectionlab/errors.hpp"
#include "sectionlab/indexing.hpp"
#include "sectionlab/scenarios.hpp"

namespace sectionlab {
namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

// Point of plane L_n at camera depth z, reached along projector ray angle phi.
Vec3 plane_point(const LineProjector& p, const CameraModel& cam, int n, double z, double phi) {
  const Vec3 dir = std::cos(phi) * p.line_direction(n) + std::sin(phi) * p.fan_axis();
  const Vec3 c = cam.to_camera(p.center());
  const double dz = (cam.pose().rotation * dir).z();
  return p.center() + ((z - c.z()) / dz) * dir;
}

ChipSignal signal_at(const CameraModel& cam, const Vec3& point, int truth) {
  ChipSignal s;
  s.pixel = project(cam, point);
  s.camera = CameraId::Main;
  s.truth_index = truth;
  s.truth_point = point;
  return s;
}

// Largest overlap-free N according to the raster oracle, pitch = span / N.
int oracle_max_lines(const fixtures::Rig& rig, const MeasurementVolume& vol, double guard,
                     double span, int limit) {
  for (int n = 1; n <= limit; ++n) {
    const LineProjector p = rig.projector.with_lines(n, span / n);
    std::vector<oracle::RasterRegion> regions;
    for (int k = 1; k <= n; ++k) {
      regions.push_back(oracle::raster_region(rig.main, p, k, vol.z_min, vol.z_max, guard, 8));
    }
    if (oracle::raster_first_overlap(regions)) return n - 1;
  }
  return limit;
}

TEST(RegionMap, SingleLineNeverOverlaps) {
  fixtures::Rig rig;
  const LineProjector p = rig.projector.with_lines(1, 0.1);
  const RegionMap map = build_region_map(rig.main, p, {100, 1000}, 5.0);
  EXPECT_EQ(map.num_lines(), 1);
  int populated = 0;
  for (int r = 0; r < map.height(); ++r) {
    ASSERT_LE(map.row(r).size(), 1u);
    populated += !map.row(r).empty();
  }
  EXPECT_EQ(populated, map.height());
}

TEST(RegionMap, IntervalsMatchRasterOracle) {
  fixtures::Rig rig;
  const double guard = 0.5;
  const RegionMap map = rig.region_map(guard);
  for (int n = 1; n <= rig.projector.num_lines(); ++n) {
    const auto raster = oracle::raster_region(rig.main, rig.projector, n, rig.config.volume.z_min,
                                              rig.config.volume.z_max, guard);
    for (int r = 0; r < map.height(); ++r) {
      const auto iv = map.interval(n, r);
      const bool raster_empty = raster.lo[r] > raster.hi[r];
      if (raster_empty) {
        EXPECT_FALSE(iv) << "line " << n << " row " << r;
        continue;
      }
      ASSERT_TRUE(iv) << "line " << n << " row " << r;
      // The raster only samples the row, so it sits inside the exact interval.
      EXPECT_LE(iv->u_min, raster.lo[r] + 1e-9);
      EXPECT_GE(iv->u_max, raster.hi[r] - 1e-9);
      EXPECT_LT(raster.lo[r] - iv->u_min, 0.05);
      EXPECT_LT(iv->u_max - raster.hi[r], 0.05);
    }
  }
}

TEST(RegionMap, RowsArePairwiseDisjoint) {
  fixtures::Rig rig;
  const RegionMap map = rig.region_map();
  for (int r = 0; r < map.height(); ++r) {
    const auto& row = map.row(r);
    for (size_t a = 0; a < row.size(); ++a) {
      ASSERT_LE(row[a].u_min, row[a].u_max);
      for (size_t b = a + 1; b < row.size(); ++b) {
        ASSERT_TRUE(row[a].u_max < row[b].u_min || row[b].u_max < row[a].u_min)
            << "row " << r << " lines " << row[a].index << "/" << row[b].index;
      }
    }
  }
}

TEST(RegionMap, MonteCarloMembershipInsideVolume) {
  fixtures::Rig rig;
  const RegionMap map = rig.region_map();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> line(1, rig.projector.num_lines());
  std::uniform_real_distribution<double> depth(rig.config.volume.z_min, rig.config.volume.z_max);
  std::uniform_real_distribution<double> phi(-0.5, 0.5);
  int tested = 0;
  for (int k = 0; k < 100000; ++k) {
    const int n = line(rng);
    const Vec3 p = plane_point(rig.projector, rig.main, n, depth(rng), phi(rng));
    const auto px = try_project(rig.main, p);
    if (!px || !rig.main.in_bounds(*px)) continue;
    ++tested;
    const auto got = map.lookup(*px);
    ASSERT_TRUE(got) << "line " << n << " pixel " << px->u << "," << px->v;
    ASSERT_EQ(*got, n);
  }
  EXPECT_GT(tested, 50000);
}

TEST(RegionMap, OverlapReportsCollidingPair) {
  fixtures::Rig rig;
  const LineProjector dense = rig.projector.with_lines(13, sweep_pitch(50 * kDeg, 13));
  std::vector<oracle::RasterRegion> regions;
  for (int k = 1; k <= 13; ++k) {
    regions.push_back(oracle::raster_region(rig.main, dense, k, rig.config.volume.z_min,
                                            rig.config.volume.z_max, 0.5));
  }
  const auto expected = oracle::raster_first_overlap(regions);
  ASSERT_TRUE(expected);
  try {
    build_region_map(rig.main, dense, rig.config.volume, 0.5);
    FAIL() << "expected RegionOverlap";
  } catch (const RegionOverlap& e) {
    EXPECT_EQ(e.row(), expected->row);
    EXPECT_EQ(e.first(), expected->first);
    EXPECT_EQ(e.second(), expected->second);
    EXPECT_EQ(e.category(), ErrorCategory::Indexing);
    const std::string pair =
        "lines " + std::to_string(e.first()) + " and " + std::to_string(e.second());
    EXPECT_NE(std::string(e.what()).find(pair), std::string::npos);
  }
}

TEST(RegionMap, RejectsInvalidInputs) {
  fixtures::Rig rig;
  EXPECT_THROW(build_region_map(rig.main, rig.projector, {280, 200}, 0.5), ValidationError);
  EXPECT_THROW(build_region_map(rig.main, rig.projector, {200, 280}, -1.0), ValidationError);
}

TEST(RegionMap, TieBreaksTowardLowerIndex) {
  std::vector<std::vector<RegionInterval>> rows(2);
  rows[0] = {{10.0, 20.0, 1}, {14.0, 30.0, 2}};
  rows[1] = {{0.0, 4.0, 3}, {4.0, 8.0, 2}};
  const RegionMap map(CameraId::Main, {200, 280}, 0.0, 3, 40, rows);
  EXPECT_EQ(map.lookup({16.0, 0.5}), 1);  // centres 15 and 22
  EXPECT_EQ(map.lookup({19.0, 0.5}), 2);  // 4 from 15, 3 from 22
  EXPECT_EQ(map.lookup({4.0, 1.0}), 2);   // equidistant from 2 and 6
  EXPECT_EQ(map.lookup({35.0, 0.5}), std::nullopt);
  EXPECT_EQ(map.lookup({5.0, -0.1}), std::nullopt);
  EXPECT_EQ(map.lookup({5.0, 2.0}), std::nullopt);
}

TEST(RegionMap, DefaultGuard) {
  EXPECT_DOUBLE_EQ(default_guard(0.0), 0.5);
  EXPECT_DOUBLE_EQ(default_guard(0.1), 0.5);
  EXPECT_DOUBLE_EQ(default_guard(0.5), 1.5);
}

TEST(AssignIndex, MidVolumePointGetsItsLine) {
  fixtures::Rig rig;
  const RegionMap map = rig.region_map();
  const Vec3 p = plane_point(rig.projector, rig.main, 2, 240.0, 0.0);
  const IndexedSignal s = assign_index(map, signal_at(rig.main, p, 2));
  ASSERT_TRUE(s.assigned_index);
  EXPECT_EQ(*s.assigned_index, 2);
}

TEST(AssignIndex, WallPointBeyondVolumeTakesNeighbourIndex) {
  fixtures::Rig rig;
  const RegionMap map = rig.region_map();
  // Line 4 hitting the wall at z = 400 lands in region 3 on this rig.
  const Vec3 p = plane_point(rig.projector, rig.main, 4, 400.0, 0.0);
  const IndexedSignal s = assign_index(map, signal_at(rig.main, p, 4));
  ASSERT_TRUE(s.assigned_index);
  EXPECT_EQ(*s.assigned_index, 3);

  const Scene scene = build_scenario(ScenarioName::WallOutside, ScenarioParams{});
  const auto frames =
      render_frames(scene, rig.projector, rig.main, rig.second, NoiseModel{0.0, 1}, 400);
  int four_as_three = 0;
  for (const auto& sig : frames.first.signals) {
    const auto got = assign_index(map, sig).assigned_index;
    four_as_three += sig.truth_index == 4 && got == 3;
  }
  EXPECT_GT(four_as_three, 0);
}

TEST(AssignIndex, PixelOutsideEveryRegionIsUnassigned) {
  fixtures::Rig rig;
  const RegionMap map = rig.region_map();
  ChipSignal s;
  s.pixel = fixtures::gap_pixel(map, 500);
  EXPECT_FALSE(assign_index(map, s).assigned_index);
  s.pixel = {500.0, 1000.0};
  EXPECT_FALSE(assign_index(map, s).assigned_index);
}

TEST(AssignIndex, SoundnessInsideVolume) {
  fixtures::Rig rig;
  const RegionMap map = rig.region_map();
  const Scene scene = build_scenario(ScenarioName::FlatInside, ScenarioParams{});
  const auto frames =
      render_frames(scene, rig.projector, rig.main, rig.second, NoiseModel{0.0, 1}, 1000);
  ASSERT_GT(frames.first.signals.size(), 5000u);
  for (const auto& sig : frames.first.signals) {
    const auto got = assign_index(map, sig).assigned_index;
    ASSERT_TRUE(got);
    ASSERT_EQ(*got, sig.truth_index);
  }
}

TEST(AssignIndex, FalseIndexEmergesOutsideVolume) {
  fixtures::Rig rig;
  const RegionMap map = rig.region_map();
  const Scene scene = build_scenario(ScenarioName::WallOutside, ScenarioParams{});
  const auto frames =
      render_frames(scene, rig.projector, rig.main, rig.second, NoiseModel{0.0, 1}, 500);
  int wrong = 0;
  for (const auto& sig : frames.first.signals) {
    const auto got = assign_index(map, sig).assigned_index;
    const bool outside = sig.truth_point.z() > rig.config.volume.z_max;
    if (!outside) {
      ASSERT_EQ(got, sig.truth_index);
    } else if (got) {
      ASSERT_NE(*got, sig.truth_index);
      ++wrong;
    }
  }
  EXPECT_GT(wrong, 100);
}

TEST(Evaluate, CorrectIndexReproducesTruth) {
  fixtures::Rig rig;
  const RegionMap map = rig.region_map();
  const Vec3 p = plane_point(rig.projector, rig.main, 7, 230.0, 0.2);
  const EvaluatedPoint e = evaluate(assign_index(map, signal_at(rig.main, p, 7)), rig.main,
                                    rig.projector);
  EXPECT_EQ(e.assigned_index, 7);
  EXPECT_LT((e.position - p).norm(), 1e-6);
}

TEST(Evaluate, FalseIndexDisplacesAlongViewingRay) {
  fixtures::Rig rig;
  const RegionMap map = rig.region_map();
  const Vec3 p = plane_point(rig.projector, rig.main, 4, 400.0, 0.1);
  const IndexedSignal s = assign_index(map, signal_at(rig.main, p, 4));
  const EvaluatedPoint e = evaluate(s, rig.main, rig.projector);
  const Ray view = pixel_ray(rig.main, s.signal.pixel);
  EXPECT_LT(distance_to_line(view, e.position), 1e-9);
  // Displacement equals the gap between the two plane intersections on the ray.
  const Vec3 on_wrong = intersect_ray_plane(view, light_plane(rig.projector, 3));
  const Vec3 on_true = intersect_ray_plane(view, light_plane(rig.projector, 4));
  EXPECT_NEAR((e.position - p).norm(), (on_wrong - on_true).norm(), 1e-6);
  EXPECT_GT((e.position - p).norm(), 50.0);
}

TEST(Evaluate, UnassignedThrows) {
  fixtures::Rig rig;
  IndexedSignal s;
  EXPECT_THROW(evaluate(s, rig.main, rig.projector), UnassignedSignal);
}

TEST(Sweep, MatchesRasterOracleForReference) {
  fixtures::Rig rig;
  const double span = 50 * kDeg;
  const SweepResult r = sweep_line_count(rig.main, rig.projector, rig.config.volume, 0.5, span, 60);
  EXPECT_EQ(r.max_lines, oracle_max_lines(rig, rig.config.volume, 0.5, span, 60));
  EXPECT_EQ(r.max_lines, 12);
  ASSERT_TRUE(r.first_overlap);
  EXPECT_EQ(*r.first_overlap, r.max_lines + 1);
}

TEST(Sweep, OverlapExactlyAtOneAboveMaximum) {
  fixtures::Rig rig;
  const double span = 50 * kDeg;
  for (double width : {40.0, 80.0, 160.0}) {
    const MeasurementVolume vol{240.0 - width / 2, 240.0 + width / 2};
    const SweepResult r = sweep_line_count(rig.main, rig.projector, vol, 0.5, span, 200);
    ASSERT_GE(r.max_lines, 1);
    const int n = r.max_lines;
    EXPECT_NO_THROW(build_region_map(rig.main, rig.projector.with_lines(n, sweep_pitch(span, n)),
                                     vol, 0.5));
    EXPECT_THROW(build_region_map(rig.main,
                                  rig.projector.with_lines(n + 1, sweep_pitch(span, n + 1)), vol,
                                  0.5),
                 RegionOverlap);
  }
}

TEST(Sweep, MonotoneInDepthWidth) {
  fixtures::Rig rig;
  const double span = 50 * kDeg;
  std::vector<int> n_max;
  for (double width : {40.0, 80.0, 160.0}) {
    const MeasurementVolume vol{240.0 - width / 2, 240.0 + width / 2};
    const int got = sweep_line_count(rig.main, rig.projector, vol, 0.5, span, 200).max_lines;
    EXPECT_EQ(got, oracle_max_lines(rig, vol, 0.5, span, 200)) << "width " << width;
    n_max.push_back(got);
  }
  EXPECT_GE(n_max[0], n_max[1]);
  EXPECT_GE(n_max[1], n_max[2]);
  EXPECT_EQ(n_max, (std::vector<int>{24, 12, 5}));
}

TEST(Sweep, PitchSplitsSpan) {
  EXPECT_DOUBLE_EQ(sweep_pitch(1.0, 4), 0.25);
  EXPECT_THROW(sweep_pitch(1.0, 0), ValidationError);
}

}  // namespace
}  // namespace sectionlab
