#include "sectionlab/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sectionlab/errors.hpp"

namespace sectionlab {

namespace {

constexpr const char* kPlyFields[] = {"x", "y", "z", "verdict", "index", "residual"};

void append_number(std::string& out, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  out += buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path, "cannot open for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

const char* to_string(CloudVariant variant) {
  switch (variant) {
    case CloudVariant::Raw:
      return "raw";
    case CloudVariant::Cleaned:
      return "cleaned";
    case CloudVariant::Corrected:
      return "corrected";
  }
  return "unknown";
}

std::vector<CloudRecord> select_cloud(const std::vector<VerifiedPoint>& points,
                                      CloudVariant variant) {
  std::vector<CloudRecord> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const auto* corrected = std::get_if<verdict::Corrected>(&p.verdict);
    const int code = static_cast<int>(verdict_code(p.verdict));
    switch (variant) {
      case CloudVariant::Raw:
        out.push_back({p.source.position, code, p.source.assigned_index, p.residual});
        break;
      case CloudVariant::Cleaned:
        if (is_deleted(p.verdict)) {
          break;
        }
        if (corrected) {
          out.push_back({corrected->new_position, code, corrected->new_index,
                         corrected->new_residual});
        } else {
          out.push_back({p.source.position, code, p.source.assigned_index, p.residual});
        }
        break;
      case CloudVariant::Corrected:
        if (corrected) {
          out.push_back({corrected->new_position, code, corrected->new_index,
                         corrected->new_residual});
        }
        break;
    }
  }
  return out;
}

std::string format_point_cloud(const std::vector<VerifiedPoint>& points, CloudVariant variant) {
  const auto records = select_cloud(points, variant);
  std::string out;
  out.reserve(64 * (records.size() + 16));
  out += "ply\nformat ascii 1.0\n";
  out += "comment sectionlab point cloud (";
  out += to_string(variant);
  out += ")\n";
  out += "comment verdict codes: 0 correct, 1 false_indexed, 2 corrected, 3 deleted_stereo_mismatch, "
         "4 deleted_no_candidate, 5 deleted_ambiguous, 6 deleted_unverifiable, 7 unverified\n";
  out += "element vertex " + std::to_string(records.size()) + "\n";
  out += "property double x\nproperty double y\nproperty double z\n";
  out += "property int verdict\nproperty int index\nproperty double residual\n";
  out += "end_header\n";
  for (const auto& r : records) {
    append_number(out, r.position.x());
    out += ' ';
    append_number(out, r.position.y());
    out += ' ';
    append_number(out, r.position.z());
    out += ' ';
    out += std::to_string(r.verdict);
    out += ' ';
    out += std::to_string(r.index);
    out += ' ';
    append_number(out, r.residual);
    out += '\n';
  }
  return out;
}

void write_point_cloud(const std::vector<VerifiedPoint>& points, const std::string& path,
                       CloudVariant variant) {
  write_file_atomically(path, format_point_cloud(points, variant));
}

std::vector<CloudRecord> parse_point_cloud(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next = [&]() {
    if (!std::getline(in, line)) {
      throw ParseError("", line_no, "unexpected end of point cloud");
    }
    ++line_no;
    return line;
  };
  if (next() != "ply" || next() != "format ascii 1.0") {
    throw ParseError("header", line_no, "not an ASCII PLY file");
  }
  long count = -1;
  int property = 0;
  while (next() != "end_header") {
    std::istringstream words(line);
    std::string keyword;
    words >> keyword;
    if (keyword == "comment") {
      continue;
    }
    if (keyword == "element") {
      std::string name;
      words >> name >> count;
      if (name != "vertex" || !words || count < 0) {
        throw ParseError("element", line_no, "expected 'element vertex <count>'");
      }
    } else if (keyword == "property") {
      std::string type, name;
      words >> type >> name;
      if (property >= 6 || name != kPlyFields[property]) {
        throw ParseError("property", line_no, "unexpected property '" + name + "'");
      }
      ++property;
    } else {
      throw ParseError("header", line_no, "unknown header line");
    }
  }
  if (count < 0 || property != 6) {
    throw ParseError("header", line_no, "incomplete header");
  }
  std::vector<CloudRecord> out;
  out.reserve(static_cast<size_t>(count));
  for (long k = 0; k < count; ++k) {
    std::istringstream fields(next());
    std::string x, y, z, residual;
    CloudRecord r;
    fields >> x >> y >> z >> r.verdict >> r.index >> residual;
    if (!fields) {
      throw ParseError("vertex", line_no, "malformed vertex line");
    }
    try {
      r.position = Vec3(std::stod(x), std::stod(y), std::stod(z));
      r.residual = std::stod(residual);
    } catch (const std::exception&) {
      throw ParseError("vertex", line_no, "malformed number");
    }
    out.push_back(r);
  }
  return out;
}

std::vector<CloudRecord> read_point_cloud(const std::string& path) {
  return parse_point_cloud(read_file(path));
}

std::string format_stats(const StatsReport& report) {
  const PipelineStats& s = report.stats;
  std::ostringstream out;
  out << "schema_version: " << kSchemaVersion << "\n";
  out << "stats:\n";
  out << "  main_signals: " << s.main_signals << "\n";
  out << "  unassigned_signals: " << s.unassigned_signals << "\n";
  out << "  total_points: " << s.total_points << "\n";
  out << "  correct_count: " << s.correct_count << "\n";
  out << "  false_count: " << s.false_count << "\n";
  out << "  corrected_count: " << s.corrected_count << "\n";
  out << "  deleted_count: " << s.deleted_count << "\n";
  out << "  deleted_stereo_mismatch: " << s.deleted_stereo_mismatch << "\n";
  out << "  deleted_no_candidate: " << s.deleted_no_candidate << "\n";
  out << "  deleted_ambiguous: " << s.deleted_ambiguous << "\n";
  out << "  deleted_unverifiable: " << s.deleted_unverifiable << "\n";
  out << "  unverified_kept: " << s.unverified_kept << "\n";
  out << "  false_fraction: "
      << format_number(s.total_points == 0 ? 0.0
                                           : static_cast<double>(s.false_count) / s.total_points)
      << "\n";
  out << "  residual_histogram:\n";
  for (size_t k = 0; k < s.residual_histogram.size(); ++k) {
    out << "    - {upper_px: "
        << (k < kResidualBinEdges.size() ? format_number(kResidualBinEdges[k]) : ".inf")
        << ", count: " << s.residual_histogram[k] << "}\n";
  }
  if (report.audit) {
    const TruthAudit& a = *report.audit;
    out << "truth_audit:\n";
    out << "  wrong_index: " << a.wrong_index << "\n";
    out << "  wrong_detected: " << a.wrong_detected << "\n";
    out << "  leakage_count: " << a.leakage << "\n";
    out << "  right_index: " << a.right_index << "\n";
    out << "  right_index_both_visible: " << a.right_index_both_visible << "\n";
    out << "  false_alarms: " << a.false_alarms << "\n";
    out << "  corrected_to_truth: " << a.corrected_to_truth << "\n";
    out << "  corrected_wrongly: " << a.corrected_wrongly << "\n";
    out << "  wrong_deleted: " << a.wrong_deleted << "\n";
    out << "  detection_recall: " << format_number(a.recall()) << "\n";
    out << "  false_alarm_rate: " << format_number(a.false_alarm_rate()) << "\n";
    out << "  max_corrected_error_mm: " << format_number(a.max_corrected_error_mm) << "\n";
  }
  if (report.sweep) {
    out << "density_sweep:\n";
    out << "  fan_span_deg: " << format_number(report.sweep->fan_span_deg) << "\n";
    out << "  guard_px: " << format_number(report.sweep->guard) << "\n";
    out << "  volumes:\n";
    for (const auto& e : report.sweep->entries) {
      out << "    - z_min: " << format_number(e.volume.z_min) << "\n";
      out << "      z_max: " << format_number(e.volume.z_max) << "\n";
      out << "      n_max: " << e.result.max_lines << "\n";
      if (e.result.first_overlap) {
        out << "      first_overlap_n: " << *e.result.first_overlap << "\n";
        out << "      overlap_pair: [" << e.result.overlap_first_line << ", "
            << e.result.overlap_second_line << "]\n";
        out << "      overlap_row: " << e.result.overlap_row << "\n";
      } else {
        out << "      first_overlap_n: null\n";
      }
    }
  }
  if (report.config) {
    out << "config:\n";
    std::istringstream echo(echo_config(*report.config, false));
    std::string line;
    while (std::getline(echo, line)) {
      if (!line.empty()) {
        out << "  " << line << "\n";
      }
    }
  }
  return out.str();
}

void write_stats(const StatsReport& report, const std::string& path) {
  write_file_atomically(path, format_stats(report));
}

void write_run_outputs(const RunResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError(dir, "cannot create output directory: " + ec.message());
  }
  const std::filesystem::path base(dir);
  for (auto variant : {CloudVariant::Raw, CloudVariant::Cleaned, CloudVariant::Corrected}) {
    write_point_cloud(result.dataset.points,
                      (base / (std::string(to_string(variant)) + ".ply")).string(), variant);
  }
  write_stats(StatsReport{result.dataset.stats, result.audit, std::nullopt, result.config},
              (base / "stats.yaml").string());
}

void write_file_atomically(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError(path, "cannot open for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      throw IoError(path, "write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError(path, "rename failed");
  }
}

}  // namespace sectionlab
