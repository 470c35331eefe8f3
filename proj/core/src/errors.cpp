#include "sectionlab/errors.hpp"

#include <sstream>

namespace sectionlab {

namespace {

std::string describe(const char* prefix, double value) {
  std::ostringstream out;
  out << prefix << value;
  return out.str();
}

}  // namespace

PointBehindCamera::PointBehindCamera(double z_cam)
    : Error(ErrorCategory::Geometry, describe("point behind camera, z_cam = ", z_cam)),
      depth_(z_cam) {}

RayParallelToPlane::RayParallelToPlane()
    : Error(ErrorCategory::Geometry, "ray is parallel to plane") {}

IntersectionBehindRay::IntersectionBehindRay(double t)
    : Error(ErrorCategory::Geometry, describe("plane intersection behind ray origin, t = ", t)) {}

IndexOutOfRange::IndexOutOfRange(int index, int num_lines)
    : Error(ErrorCategory::Indexing, "line index " + std::to_string(index) +
                                         " outside 1.." + std::to_string(num_lines)) {}

RegionOverlap::RegionOverlap(int first, int second, int row)
    : Error(ErrorCategory::Indexing,
            "regions of lines " + std::to_string(first) + " and " + std::to_string(second) +
                " overlap in chip row " + std::to_string(row)),
      first_(first),
      second_(second),
      row_(row) {}

UnassignedSignal::UnassignedSignal()
    : Error(ErrorCategory::Indexing, "signal has no assigned line index") {}

Unverifiable::Unverifiable()
    : Error(ErrorCategory::Verification, "second frame is empty; point cannot be verified") {}

ConfigMismatch::ConfigMismatch(const std::string& what)
    : Error(ErrorCategory::Validation, "configuration mismatch: " + what) {}

ParseError::ParseError(const std::string& field, int line, const std::string& message)
    : Error(ErrorCategory::Parse,
            "parse error" + (line > 0 ? " at line " + std::to_string(line) : std::string{}) +
                (field.empty() ? std::string{} : " (field '" + field + "')") + ": " + message),
      field_(field),
      line_(line) {}

ValidationError::ValidationError(const std::string& invariant, const std::string& message)
    : Error(ErrorCategory::Validation, invariant + ": " + message), invariant_(invariant) {}

IoError::IoError(const std::string& path, const std::string& message)
    : Error(ErrorCategory::Io, path + ": " + message) {}

}  // namespace sectionlab
