#include "sectionlab/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "sectionlab/errors.hpp"

namespace sectionlab {

namespace {

constexpr double kDeg = M_PI / 180.0;

int line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

void require_map(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) {
    throw ParseError(field, line_of(node), "expected a mapping");
  }
}

void check_keys(const YAML::Node& node, const std::string& field,
                const std::set<std::string>& allowed) {
  require_map(node, field);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (allowed.count(key) == 0) {
      const std::string where = field.empty() ? key : field + "." + key;
      throw ParseError(where, line_of(kv.first), "unknown key");
    }
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError(field, line_of(node), "invalid value");
  }
}

template <typename T>
void read_opt(const YAML::Node& parent, const std::string& key, const std::string& prefix,
              T& out) {
  if (const YAML::Node n = parent[key]) {
    out = scalar<T>(n, prefix + key);
  }
}

Vec3 vec3(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence() || node.size() != 3) {
    throw ParseError(field, line_of(node), "expected a list of 3 numbers");
  }
  return Vec3(scalar<double>(node[0], field), scalar<double>(node[1], field),
              scalar<double>(node[2], field));
}

void read_vec3(const YAML::Node& parent, const std::string& key, const std::string& prefix,
               Vec3& out) {
  if (const YAML::Node n = parent[key]) {
    out = vec3(n, prefix + key);
  }
}

std::array<double, 2> pair(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence() || node.size() != 2) {
    throw ParseError(field, line_of(node), "expected a list of 2 numbers");
  }
  return {scalar<double>(node[0], field), scalar<double>(node[1], field)};
}

CameraSpec parse_camera(const YAML::Node& node, const std::string& field, CameraSpec spec) {
  check_keys(node, field, {"fx", "fy", "cx", "cy", "width", "height", "position", "look_at", "up"});
  const std::string p = field + ".";
  read_opt(node, "fx", p, spec.fx);
  read_opt(node, "fy", p, spec.fy);
  read_opt(node, "cx", p, spec.cx);
  read_opt(node, "cy", p, spec.cy);
  read_opt(node, "width", p, spec.width);
  read_opt(node, "height", p, spec.height);
  read_vec3(node, "position", p, spec.position);
  read_vec3(node, "look_at", p, spec.look_at);
  read_vec3(node, "up", p, spec.up);
  return spec;
}

ProjectorSpec parse_projector(const YAML::Node& node, ProjectorSpec spec) {
  check_keys(node, "projector",
             {"position", "direction", "fan_axis", "num_lines", "pitch_deg", "aperture_deg"});
  const std::string p = "projector.";
  read_vec3(node, "position", p, spec.position);
  read_vec3(node, "direction", p, spec.direction);
  read_vec3(node, "fan_axis", p, spec.fan_axis);
  read_opt(node, "num_lines", p, spec.num_lines);
  read_opt(node, "pitch_deg", p, spec.pitch_deg);
  read_opt(node, "aperture_deg", p, spec.aperture_deg);
  return spec;
}

Axis parse_axis(const YAML::Node& node, const std::string& field) {
  const auto text = scalar<std::string>(node, field);
  if (text == "x") return Axis::X;
  if (text == "y") return Axis::Y;
  if (text == "z") return Axis::Z;
  throw ParseError(field, line_of(node), "axis must be x, y or z");
}

Surface parse_surface(const YAML::Node& node, const std::string& field) {
  require_map(node, field);
  const YAML::Node type_node = node["type"];
  if (!type_node) {
    throw ParseError(field + ".type", line_of(node), "missing surface type");
  }
  const auto type = scalar<std::string>(type_node, field + ".type");
  const std::string p = field + ".";
  if (type == "sphere") {
    check_keys(node, field, {"type", "center", "radius"});
    Sphere s;
    read_vec3(node, "center", p, s.center);
    read_opt(node, "radius", p, s.radius);
    return s;
  }
  if (type == "axis_plane") {
    check_keys(node, field, {"type", "axis", "offset", "lower", "upper"});
    AxisPlane s;
    if (node["axis"]) s.axis = parse_axis(node["axis"], p + "axis");
    read_opt(node, "offset", p, s.offset);
    if (node["lower"]) s.lower = pair(node["lower"], p + "lower");
    if (node["upper"]) s.upper = pair(node["upper"], p + "upper");
    return s;
  }
  if (type == "heightfield") {
    check_keys(node, field, {"type", "x_range", "y_range", "cols", "rows", "heights"});
    Heightfield s;
    if (node["x_range"]) {
      const auto r = pair(node["x_range"], p + "x_range");
      s.x_min = r[0];
      s.x_max = r[1];
    }
    if (node["y_range"]) {
      const auto r = pair(node["y_range"], p + "y_range");
      s.y_min = r[0];
      s.y_max = r[1];
    }
    read_opt(node, "cols", p, s.cols);
    read_opt(node, "rows", p, s.rows);
    const YAML::Node h = node["heights"];
    if (!h || !h.IsSequence()) {
      throw ParseError(p + "heights", line_of(node), "expected a list of heights");
    }
    for (const auto& v : h) {
      s.heights.push_back(scalar<double>(v, p + "heights"));
    }
    return s;
  }
  if (type == "mesh") {
    check_keys(node, field, {"type", "vertices", "triangles"});
    TriangleMesh s;
    const YAML::Node verts = node["vertices"];
    const YAML::Node tris = node["triangles"];
    if (!verts || !verts.IsSequence() || !tris || !tris.IsSequence()) {
      throw ParseError(field, line_of(node), "mesh needs vertices and triangles lists");
    }
    for (const auto& v : verts) {
      s.vertices.push_back(vec3(v, p + "vertices"));
    }
    for (const auto& t : tris) {
      if (!t.IsSequence() || t.size() != 3) {
        throw ParseError(p + "triangles", line_of(t), "expected 3 vertex indices");
      }
      s.triangles.push_back({scalar<int>(t[0], p + "triangles"),
                             scalar<int>(t[1], p + "triangles"),
                             scalar<int>(t[2], p + "triangles")});
    }
    return s;
  }
  throw ParseError(p + "type", line_of(type_node), "unknown surface type '" + type + "'");
}

SceneSpec parse_scene(const YAML::Node& node, SceneSpec spec) {
  check_keys(node, "scene",
             {"builtin", "surfaces", "plate_z", "plate_half_size", "object_z", "object_bulge",
              "object_half_width", "object_half_height", "object_grid", "wall_z",
              "wall_half_size", "sphere_x", "sphere_y", "sphere_z", "sphere_radius"});
  const bool has_builtin = static_cast<bool>(node["builtin"]);
  const bool has_surfaces = static_cast<bool>(node["surfaces"]);
  if (has_builtin == has_surfaces) {
    throw ParseError("scene", line_of(node), "give exactly one of 'builtin' or 'surfaces'");
  }
  if (has_builtin) {
    const auto name = scalar<std::string>(node["builtin"], "scene.builtin");
    spec.builtin = parse_scenario_name(name);
    if (!spec.builtin) {
      throw ParseError("scene.builtin", line_of(node["builtin"]),
                       "unknown scenario '" + name + "'");
    }
    spec.surfaces.clear();
  } else {
    spec.builtin.reset();
    const YAML::Node list = node["surfaces"];
    if (!list.IsSequence()) {
      throw ParseError("scene.surfaces", line_of(list), "expected a list");
    }
    for (std::size_t k = 0; k < list.size(); ++k) {
      spec.surfaces.push_back(parse_surface(list[k], "scene.surfaces[" + std::to_string(k) + "]"));
    }
  }
  auto& sp = spec.params;
  const std::string p = "scene.";
  read_opt(node, "plate_z", p, sp.plate_z);
  read_opt(node, "plate_half_size", p, sp.plate_half_size);
  read_opt(node, "object_z", p, sp.object_z);
  read_opt(node, "object_bulge", p, sp.object_bulge);
  read_opt(node, "object_half_width", p, sp.object_half_width);
  read_opt(node, "object_half_height", p, sp.object_half_height);
  read_opt(node, "object_grid", p, sp.object_grid);
  read_opt(node, "wall_z", p, sp.wall_z);
  read_opt(node, "wall_half_size", p, sp.wall_half_size);
  read_opt(node, "sphere_x", p, sp.sphere_x);
  read_opt(node, "sphere_y", p, sp.sphere_y);
  read_opt(node, "sphere_z", p, sp.sphere_z);
  read_opt(node, "sphere_radius", p, sp.sphere_radius);
  return spec;
}

VerifyMode parse_mode(const YAML::Node& node, const std::string& field) {
  const auto text = scalar<std::string>(node, field);
  if (text == "delete") return VerifyMode::Delete;
  if (text == "correct") return VerifyMode::Correct;
  throw ParseError(field, line_of(node), "mode must be 'delete' or 'correct'");
}

RunConfig parse_root(const YAML::Node& root) {
  if (!root || root.IsNull()) {
    throw ParseError("", 0, "empty configuration");
  }
  check_keys(root, "",
             {"schema_version", "seed", "scene", "main_camera", "second_camera", "projector",
              "volume", "noise", "sampling", "verify", "sweep", "output"});
  RunConfig cfg = default_config();

  const YAML::Node version = root["schema_version"];
  if (!version) {
    throw ParseError("schema_version", 1, "missing schema_version");
  }
  cfg.schema_version = scalar<int>(version, "schema_version");
  if (cfg.schema_version != kSchemaVersion) {
    throw ParseError("schema_version", line_of(version),
                     "unsupported schema version " + std::to_string(cfg.schema_version));
  }
  read_opt(root, "seed", "", cfg.seed);

  if (const YAML::Node n = root["scene"]) cfg.scene = parse_scene(n, cfg.scene);
  if (const YAML::Node n = root["main_camera"]) {
    cfg.main_camera = parse_camera(n, "main_camera", cfg.main_camera);
  }
  if (const YAML::Node n = root["second_camera"]) {
    cfg.second_camera = parse_camera(n, "second_camera", cfg.second_camera);
  }
  if (const YAML::Node n = root["projector"]) cfg.projector = parse_projector(n, cfg.projector);
  if (const YAML::Node n = root["volume"]) {
    check_keys(n, "volume", {"z_min", "z_max"});
    read_opt(n, "z_min", "volume.", cfg.volume.z_min);
    read_opt(n, "z_max", "volume.", cfg.volume.z_max);
  }
  if (const YAML::Node n = root["noise"]) {
    check_keys(n, "noise", {"sigma"});
    read_opt(n, "sigma", "noise.", cfg.noise_sigma);
  }
  if (const YAML::Node n = root["sampling"]) {
    check_keys(n, "sampling", {"samples_per_line"});
    read_opt(n, "samples_per_line", "sampling.", cfg.samples_per_line);
  }
  if (const YAML::Node n = root["verify"]) {
    check_keys(n, "verify", {"epsilon", "mode", "keep_unverified", "guard"});
    read_opt(n, "epsilon", "verify.", cfg.tolerance.epsilon);
    if (n["mode"]) cfg.mode = parse_mode(n["mode"], "verify.mode");
    read_opt(n, "keep_unverified", "verify.", cfg.keep_unverified);
    if (n["guard"]) cfg.guard = scalar<double>(n["guard"], "verify.guard");
  }
  if (const YAML::Node n = root["sweep"]) {
    check_keys(n, "sweep", {"fan_span_deg", "line_limit", "depth_widths"});
    read_opt(n, "fan_span_deg", "sweep.", cfg.sweep.fan_span_deg);
    read_opt(n, "line_limit", "sweep.", cfg.sweep.line_limit);
    if (const YAML::Node w = n["depth_widths"]) {
      if (!w.IsSequence()) {
        throw ParseError("sweep.depth_widths", line_of(w), "expected a list");
      }
      cfg.sweep.depth_widths.clear();
      for (const auto& v : w) {
        cfg.sweep.depth_widths.push_back(scalar<double>(v, "sweep.depth_widths"));
      }
    }
  }
  if (const YAML::Node n = root["output"]) {
    check_keys(n, "output", {"dir"});
    read_opt(n, "dir", "output.", cfg.out_dir);
  }
  return cfg;
}

YAML::Node vec_node(const Vec3& v) {
  YAML::Node n(YAML::NodeType::Sequence);
  n.SetStyle(YAML::EmitterStyle::Flow);
  n.push_back(format_number(v.x()));
  n.push_back(format_number(v.y()));
  n.push_back(format_number(v.z()));
  return n;
}

YAML::Node camera_node(const CameraSpec& c) {
  YAML::Node n;
  n["fx"] = format_number(c.fx);
  n["fy"] = format_number(c.fy);
  n["cx"] = format_number(c.cx);
  n["cy"] = format_number(c.cy);
  n["width"] = c.width;
  n["height"] = c.height;
  n["position"] = vec_node(c.position);
  n["look_at"] = vec_node(c.look_at);
  n["up"] = vec_node(c.up);
  return n;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

CameraModel CameraSpec::build() const {
  return CameraModel(fx, fy, cx, cy, width, height, sectionlab::look_at(position, look_at, up));
}

LineProjector ProjectorSpec::build() const {
  return LineProjector(position, direction, fan_axis, num_lines, pitch_deg * kDeg,
                       aperture_deg * kDeg);
}

Scene SceneSpec::build() const {
  if (builtin) {
    return build_scenario(*builtin, params);
  }
  return Scene(surfaces);
}

double RunConfig::effective_guard() const {
  return guard ? *guard : default_guard(noise_sigma);
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.second_camera.position = Vec3(-31.0, 0.0, 0.0);
  cfg.second_camera.look_at = Vec3(0.0, 0.0, 300.0);
  cfg.sweep.depth_widths = {40.0, 80.0, 160.0};
  return cfg;
}

RunConfig demo_config(ScenarioName scenario) {
  RunConfig cfg = default_config();
  cfg.scene.builtin = scenario;
  cfg.scene.surfaces.clear();
  cfg.out_dir = std::string("out/") + to_string(scenario);
  return cfg;
}

void validate(const RunConfig& cfg) {
  if (cfg.schema_version != kSchemaVersion) {
    throw ValidationError("RunConfig", "unsupported schema version");
  }
  cfg.volume.validate();
  cfg.tolerance.validate();
  if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma)) {
    throw ValidationError("NoiseModel", "sigma must be >= 0");
  }
  if (cfg.samples_per_line < 1) {
    throw ValidationError("RunConfig", "samples_per_line must be >= 1");
  }
  if (cfg.guard && !(*cfg.guard >= 0.0)) {
    throw ValidationError("RegionMap", "guard must be >= 0");
  }
  if (!(cfg.sweep.fan_span_deg > 0.0) || cfg.sweep.line_limit < 1) {
    throw ValidationError("SweepSpec", "fan span must be positive and line_limit >= 1");
  }
  for (double w : cfg.sweep.depth_widths) {
    const double mid = 0.5 * (cfg.volume.z_min + cfg.volume.z_max);
    if (!(w > 0.0) || !(mid - 0.5 * w > 0.0)) {
      throw ValidationError("SweepSpec", "depth widths must be positive and keep z_min > 0");
    }
  }
  const Scene scene = cfg.scene.build();
  if (scene.empty()) {
    throw ValidationError("Scene", "scene has no surfaces");
  }
  const CameraModel main = cfg.main_camera.build();
  cfg.second_camera.build();
  const LineProjector projector = cfg.projector.build();
  build_region_map(main, projector, cfg.volume, cfg.effective_guard());
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError("", e.mark.line + 1, e.msg);
  }
  RunConfig cfg = parse_root(root);
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path, "cannot open configuration file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string echo_config(const RunConfig& cfg, bool include_output) {
  YAML::Node root;
  root["schema_version"] = cfg.schema_version;
  root["seed"] = cfg.seed;

  YAML::Node scene;
  if (cfg.scene.builtin) {
    const auto& p = cfg.scene.params;
    scene["builtin"] = to_string(*cfg.scene.builtin);
    switch (*cfg.scene.builtin) {
      case ScenarioName::FlatInside:
      case ScenarioName::DensitySweep:
        scene["plate_z"] = format_number(p.plate_z);
        scene["plate_half_size"] = format_number(p.plate_half_size);
        break;
      case ScenarioName::WallOutside:
        scene["object_z"] = format_number(p.object_z);
        scene["object_bulge"] = format_number(p.object_bulge);
        scene["object_half_width"] = format_number(p.object_half_width);
        scene["object_half_height"] = format_number(p.object_half_height);
        scene["object_grid"] = p.object_grid;
        scene["wall_z"] = format_number(p.wall_z);
        scene["wall_half_size"] = format_number(p.wall_half_size);
        break;
      case ScenarioName::SphereWall:
        scene["sphere_x"] = format_number(p.sphere_x);
        scene["sphere_y"] = format_number(p.sphere_y);
        scene["sphere_z"] = format_number(p.sphere_z);
        scene["sphere_radius"] = format_number(p.sphere_radius);
        scene["wall_z"] = format_number(p.wall_z);
        scene["wall_half_size"] = format_number(p.wall_half_size);
        break;
    }
  } else {
    scene["surfaces"] = static_cast<int>(cfg.scene.surfaces.size());
  }
  root["scene"] = scene;
  root["main_camera"] = camera_node(cfg.main_camera);
  root["second_camera"] = camera_node(cfg.second_camera);

  YAML::Node proj;
  proj["position"] = vec_node(cfg.projector.position);
  proj["direction"] = vec_node(cfg.projector.direction);
  proj["fan_axis"] = vec_node(cfg.projector.fan_axis);
  proj["num_lines"] = cfg.projector.num_lines;
  proj["pitch_deg"] = format_number(cfg.projector.pitch_deg);
  proj["aperture_deg"] = format_number(cfg.projector.aperture_deg);
  root["projector"] = proj;

  root["volume"]["z_min"] = format_number(cfg.volume.z_min);
  root["volume"]["z_max"] = format_number(cfg.volume.z_max);
  root["noise"]["sigma"] = format_number(cfg.noise_sigma);
  root["sampling"]["samples_per_line"] = cfg.samples_per_line;
  root["verify"]["epsilon"] = format_number(cfg.tolerance.epsilon);
  root["verify"]["mode"] = to_string(cfg.mode);
  root["verify"]["keep_unverified"] = cfg.keep_unverified;
  root["verify"]["guard"] = format_number(cfg.effective_guard());

  YAML::Node widths(YAML::NodeType::Sequence);
  widths.SetStyle(YAML::EmitterStyle::Flow);
  for (double w : cfg.sweep.depth_widths) {
    widths.push_back(format_number(w));
  }
  root["sweep"]["fan_span_deg"] = format_number(cfg.sweep.fan_span_deg);
  root["sweep"]["line_limit"] = cfg.sweep.line_limit;
  root["sweep"]["depth_widths"] = widths;
  if (include_output) {
    root["output"]["dir"] = cfg.out_dir;
  }

  YAML::Emitter out;
  out << root;
  return std::string(out.c_str()) + "\n";
}

}  // namespace sectionlab
