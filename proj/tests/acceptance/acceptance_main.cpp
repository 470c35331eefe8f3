// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Thresholds are the project targets; nothing here is tuned to pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sectionlab/errors.hpp"
#include "sectionlab/output.hpp"

namespace sl = sectionlab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok;
  std::string detail;
};

Outcome roundtrip() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto t0 = Clock::now();
  double worst = 0.0;
  int done = 0;
  while (done < 10000) {
    const sl::Mat3 r = sl::oracle::random_rotation(rng);
    const sl::RigidTransform pose{r, sl::Vec3(100 * g(rng), 100 * g(rng), 100 * g(rng))};
    const sl::CameraModel cam(500 + 1500 * u(rng), 500 + 1500 * u(rng), 300 + 400 * u(rng),
                              300 + 400 * u(rng), 1000, 1000, pose);
    // Point in front of the camera, plane through it with a random normal.
    const sl::Vec3 pc(200 * (u(rng) - 0.5), 200 * (u(rng) - 0.5), 50 + 500 * u(rng));
    const sl::Vec3 p = pose.apply_inverse(pc);
    const sl::Vec3 n(g(rng), g(rng), g(rng));
    const sl::Plane plane = sl::Plane::from_point_normal(p, n);
    const sl::Vec3 view = (p - cam.center()).normalized();
    if (std::abs(plane.normal.dot(view)) < 0.05) continue;  // grazing: ill-conditioned
    const sl::Vec3 back = sl::triangulate(cam, sl::project(cam, p), plane);
    worst = std::max(worst, (back - p).norm());
    ++done;
  }
  const double dt = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "max error %.3g mm over %d triples, %.3f s", worst, done, dt);
  return {worst < 1e-6 && dt < 1.0, buf};
}

Outcome soundness_inside() {
  const sl::RunResult r =
      sl::run_pipeline(sl::fixtures::scenario_config(sl::ScenarioName::FlatInside, 0.0, 1000));
  std::size_t right = 0;
  const sl::fixtures::Rig rig(r.config);
  const sl::RegionMap map = rig.region_map(r.config.effective_guard());
  for (const auto& s : r.main_frame.signals) {
    const auto idx = sl::assign_index(map, s).assigned_index;
    right += idx && *idx == s.truth_index;
  }
  const std::size_t total = r.main_frame.signals.size();
  return {total > 0 && right == total,
          std::to_string(right) + "/" + std::to_string(total) + " signals correctly indexed"};
}

Outcome false_index_reproduction() {
  const sl::fixtures::Rig rig(sl::demo_config(sl::ScenarioName::WallOutside));
  const sl::Scene scene = rig.config.scene.build();
  const auto frames = sl::render_frames(scene, rig.projector, rig.main, rig.second,
                                        sl::NoiseModel{0.0, 1}, 2000);
  const sl::RegionMap map = rig.region_map(0.5);
  std::size_t wall_assigned = 0, wrong = 0;
  double worst = 0.0;
  for (const auto& s : frames.first.signals) {
    if (s.truth_point.z() <= rig.config.volume.z_max) continue;
    const sl::IndexedSignal idx = sl::assign_index(map, s);
    if (!idx.assigned_index) continue;
    ++wall_assigned;
    if (*idx.assigned_index == s.truth_index) continue;
    ++wrong;
    const sl::EvaluatedPoint e = sl::evaluate(idx, rig.main, rig.projector);
    // The viewing ray through the true surface point, independent of the pixel.
    const sl::Ray view = sl::Ray::through(rig.main.center(), s.truth_point - rig.main.center());
    worst = std::max(worst, sl::distance_to_line(view, e.position));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu assigned wall signals wrong, collinearity %.3g mm",
                wrong, wall_assigned, worst);
  return {wall_assigned > 0 && wrong == wall_assigned && worst < 1e-9, buf};
}

Outcome stereo_recall() {
  std::string detail;
  bool ok = true;
  for (double sigma : {0.0, 0.1}) {
    sl::RunConfig cfg = sl::fixtures::scenario_config(sl::ScenarioName::WallOutside, sigma, 2000);
    cfg.tolerance.epsilon = 1.0;
    const sl::RunResult r = sl::run_pipeline(cfg);
    const double recall = r.audit.recall();
    const double fa = r.audit.false_alarm_rate();
    if (sigma == 0.0) {
      ok = ok && recall == 1.0 && r.audit.false_alarms == 0;
    } else {
      ok = ok && recall >= 0.99 && fa <= 0.01;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%ssigma %.1f: recall %.4f (%zu), false alarms %.4f (%zu/%zu)",
                  detail.empty() ? "" : "; ", sigma, recall, r.audit.wrong_index, fa,
                  r.audit.false_alarms, r.audit.right_index_both_visible);
    detail += buf;
  }
  return {ok, detail};
}

Outcome correction_fidelity() {
  sl::RunConfig cfg = sl::fixtures::scenario_config(sl::ScenarioName::WallOutside, 0.0, 2000);
  cfg.mode = sl::VerifyMode::Correct;
  const sl::RunResult r = sl::run_pipeline(cfg);
  std::size_t wrong = 0, fixed = 0, deleted = 0, silent = 0;
  for (const auto& p : r.dataset.points) {
    const auto& sig = p.source.source.signal;
    if (p.source.assigned_index == sig.truth_index) continue;
    ++wrong;
    if (const auto* c = std::get_if<sl::verdict::Corrected>(&p.verdict)) {
      if (c->new_index == sig.truth_index && (c->new_position - sig.truth_point).norm() <= 1e-6) {
        ++fixed;
      } else {
        ++silent;
      }
    } else if (const auto* d = std::get_if<sl::verdict::Deleted>(&p.verdict)) {
      const bool allowed = d->reason == sl::DeleteReason::NoCandidate ||
                           d->reason == sl::DeleteReason::AmbiguousCandidates;
      allowed ? ++deleted : ++silent;
    } else {
      ++silent;
    }
  }
  const double rate = wrong ? static_cast<double>(fixed) / wrong : 0.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu corrected to truth (%.4f), %zu deleted, %zu wrong",
                fixed, wrong, rate, deleted, silent);
  return {wrong > 0 && rate >= 0.95 && silent == 0 && fixed + deleted == wrong, buf};
}

Outcome ratio_analog() {
  const auto t0 = Clock::now();
  const sl::RunResult r =
      sl::run_pipeline(sl::fixtures::scenario_config(sl::ScenarioName::WallOutside, 0.1, 6000));
  const double dt = seconds_since(t0);
  const auto& s = r.dataset.stats;
  const double frac = s.total_points ? static_cast<double>(s.false_count) / s.total_points : 0.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu points, %zu false, fraction %.4f, %.2f s", s.total_points,
                s.false_count, frac, dt);
  return {s.total_points >= 50000 && std::abs(frac - 0.25) <= 0.05 && dt < 30.0, buf};
}

Outcome density_tradeoff() {
  const sl::RunConfig cfg = sl::demo_config(sl::ScenarioName::DensitySweep);
  const sl::SweepReport sweep = sl::run_sweep(cfg);
  // Entries after the first are the three increasing widths.
  bool monotone = sweep.entries.size() == 4;
  for (std::size_t k = 2; monotone && k < sweep.entries.size(); ++k) {
    monotone = sweep.entries[k].result.max_lines <= sweep.entries[k - 1].result.max_lines;
  }
  const sl::fixtures::Rig rig(cfg);
  const double span = sweep.fan_span_deg * M_PI / 180.0;
  bool exact = true;
  std::string detail;
  for (const auto& e : sweep.entries) {
    const int n = e.result.max_lines;
    bool fits = true, overlaps = false;
    try {
      sl::build_region_map(rig.main, rig.projector.with_lines(n, sl::sweep_pitch(span, n)),
                           e.volume, sweep.guard);
    } catch (const sl::RegionOverlap&) {
      fits = false;
    }
    try {
      sl::build_region_map(rig.main, rig.projector.with_lines(n + 1, sl::sweep_pitch(span, n + 1)),
                           e.volume, sweep.guard);
    } catch (const sl::RegionOverlap&) {
      overlaps = true;
    }
    exact = exact && fits && overlaps;
    detail += (detail.empty() ? "" : ", ") + std::string("dz ") +
              std::to_string(static_cast<int>(e.volume.width())) + " -> " + std::to_string(n);
  }
  return {monotone && exact, "n_max " + detail};
}

Outcome leakage_reported() {
  const sl::RunResult r =
      sl::run_pipeline(sl::fixtures::scenario_config(sl::ScenarioName::WallOutside, 0.1, 6000));
  const std::string text =
      sl::format_stats({r.dataset.stats, r.audit, std::nullopt, r.config});
  const std::string key = "leakage_count: ";
  const auto pos = text.find(key);
  if (pos == std::string::npos) return {false, "stats report has no leakage_count"};
  const std::size_t reported = std::stoul(text.substr(pos + key.size()));
  constexpr std::size_t kFrozenLeakage = 0;
  return {reported == r.audit.leakage && reported == kFrozenLeakage,
          "leakage_count " + std::to_string(reported) + " (frozen " +
              std::to_string(kFrozenLeakage) + ")"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "sectionlab_acceptance_det";
  fs::remove_all(root);
  std::size_t compared = 0;
  for (const auto& name : sl::scenario_names()) {
    const auto scenario = *sl::parse_scenario_name(name);
    if (scenario == sl::ScenarioName::DensitySweep) continue;
    const sl::RunConfig cfg = sl::demo_config(scenario);
    for (const char* run : {"a", "b"}) {
      const fs::path dir = root / name / run;
      fs::create_directories(dir);
      sl::write_run_outputs(sl::run_pipeline(cfg), dir.string());
    }
    for (const char* file : {"raw.ply", "cleaned.ply", "corrected.ply", "stats.yaml"}) {
      const std::string a = slurp(root / name / "a" / file);
      if (a.empty() || a != slurp(root / name / "b" / file)) {
        return {false, name + "/" + file + " differs between runs"};
      }
      ++compared;
    }
  }
  fs::remove_all(root);
  return {compared == 12, std::to_string(compared) + " files byte-identical across two runs"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"round-trip exactness", roundtrip},
      {"indexing soundness inside the volume", soundness_inside},
      {"false-index reproduction outside the volume", false_index_reproduction},
      {"stereo-test recall and false alarms", stereo_recall},
      {"correction fidelity", correction_fidelity},
      {"false-fraction analog", ratio_analog},
      {"line density versus depth tradeoff", density_tradeoff},
      {"leakage measurement", leakage_reported},
      {"determinism", determinism},
  };
  int failures = 0;
  int id = 1;
  for (const auto& [name, check] : criteria) {
    Outcome out{false, ""};
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d (%s): %s\n", out.ok ? "PASS" : "FAIL", id, name,
                out.detail.c_str());
    failures += !out.ok;
    ++id;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
