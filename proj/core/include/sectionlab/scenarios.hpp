#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sectionlab/scene.hpp"

namespace sectionlab {

enum class ScenarioName { FlatInside, WallOutside, SphereWall, DensitySweep };

const char* to_string(ScenarioName name);
std::optional<ScenarioName> parse_scenario_name(const std::string& text);
std::vector<std::string> scenario_names();

/// Parameters of the built-in scenes, millimetres. Defaults describe the
/// reference desk-scale setup; each scenario reads only its own subset.
struct ScenarioParams {
  // flat_inside / density_sweep: fronto-parallel plate.
  double plate_z = 240.0;
  double plate_half_size = 400.0;

  // wall_outside: dome-shaped object inside the volume, wall beyond it.
  double object_z = 255.0;        // dome rim depth
  double object_bulge = 30.0;     // rim-to-apex depth difference
  double object_half_width = 300.0;
  double object_half_height = 90.0;
  int object_grid = 33;
  double wall_z = 400.0;
  double wall_half_size = 600.0;

  // sphere_wall: sphere inside the volume in front of the wall.
  double sphere_x = 0.0;
  double sphere_y = 0.0;
  double sphere_z = 240.0;
  double sphere_radius = 35.0;
};

Scene build_scenario(ScenarioName name, const ScenarioParams& params);

}  // namespace sectionlab
