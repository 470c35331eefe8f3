#pragma once

#include <stdexcept>
#include <string>

namespace sectionlab {

/// Broad failure category. The CLI maps each category to its exit code.
enum class ErrorCategory {
  Geometry,
  Indexing,
  Verification,
  Parse,
  Validation,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class PointBehindCamera : public Error {
 public:
  explicit PointBehindCamera(double z_cam);
  double depth() const noexcept { return depth_; }

 private:
  double depth_;
};

class RayParallelToPlane : public Error {
 public:
  RayParallelToPlane();
};

class IntersectionBehindRay : public Error {
 public:
  explicit IntersectionBehindRay(double t);
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(int index, int num_lines);
};

/// Two dilated line regions share a chip row, so indexing inside the
/// measurement volume is no longer unique.
class RegionOverlap : public Error {
 public:
  RegionOverlap(int first, int second, int row);
  int first() const noexcept { return first_; }
  int second() const noexcept { return second_; }
  int row() const noexcept { return row_; }

 private:
  int first_;
  int second_;
  int row_;
};

class UnassignedSignal : public Error {
 public:
  UnassignedSignal();
};

class Unverifiable : public Error {
 public:
  Unverifiable();
};

class ConfigMismatch : public Error {
 public:
  explicit ConfigMismatch(const std::string& what);
};

class ParseError : public Error {
 public:
  ParseError(const std::string& field, int line, const std::string& message);
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& invariant, const std::string& message);
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& message);
};

}  // namespace sectionlab
