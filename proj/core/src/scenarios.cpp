#include "sectionlab/scenarios.hpp"

#include <array>

namespace sectionlab {

namespace {

constexpr std::array<ScenarioName, 4> kAll{ScenarioName::FlatInside, ScenarioName::WallOutside,
                                           ScenarioName::SphereWall, ScenarioName::DensitySweep};

AxisPlane plate(double z, double half) {
  return AxisPlane{Axis::Z, z, {-half, -half}, {half, half}};
}

Heightfield dome(const ScenarioParams& p) {
  Heightfield hf;
  hf.x_min = -p.object_half_width;
  hf.x_max = p.object_half_width;
  hf.y_min = -p.object_half_height;
  hf.y_max = p.object_half_height;
  hf.cols = p.object_grid;
  hf.rows = p.object_grid;
  hf.heights.resize(static_cast<size_t>(hf.cols) * static_cast<size_t>(hf.rows));
  for (int j = 0; j < hf.rows; ++j) {
    const double y = -1.0 + 2.0 * j / (hf.rows - 1);
    for (int i = 0; i < hf.cols; ++i) {
      const double x = -1.0 + 2.0 * i / (hf.cols - 1);
      hf.heights[static_cast<size_t>(j) * hf.cols + i] =
          p.object_z - p.object_bulge * (1.0 - x * x) * (1.0 - y * y);
    }
  }
  return hf;
}

}  // namespace

const char* to_string(ScenarioName name) {
  switch (name) {
    case ScenarioName::FlatInside:
      return "flat_inside";
    case ScenarioName::WallOutside:
      return "wall_outside";
    case ScenarioName::SphereWall:
      return "sphere_wall";
    case ScenarioName::DensitySweep:
      return "density_sweep";
  }
  return "unknown";
}

std::optional<ScenarioName> parse_scenario_name(const std::string& text) {
  for (auto name : kAll) {
    if (text == to_string(name)) {
      return name;
    }
  }
  return std::nullopt;
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (auto name : kAll) {
    out.emplace_back(to_string(name));
  }
  return out;
}

Scene build_scenario(ScenarioName name, const ScenarioParams& p) {
  Scene scene;
  switch (name) {
    case ScenarioName::FlatInside:
    case ScenarioName::DensitySweep:
      scene.add(plate(p.plate_z, p.plate_half_size));
      break;
    case ScenarioName::WallOutside:
      scene.add(dome(p));
      scene.add(plate(p.wall_z, p.wall_half_size));
      break;
    case ScenarioName::SphereWall:
      scene.add(Sphere{Vec3(p.sphere_x, p.sphere_y, p.sphere_z), p.sphere_radius});
      scene.add(plate(p.wall_z, p.wall_half_size));
      break;
  }
  return scene;
}

}  // namespace sectionlab
