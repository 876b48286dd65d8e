#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace axialgen {

enum class ErrorCode {
  NonFiniteCoordinate,
  DegenerateSegment,
  DegenerateRing,
  SelfIntersectingRing,
  HoleOutsideOuter,
  OverlappingHoles,
  NestedHoles,
  ViewpointOutsideFreeSpace,
  PointOutsideFreeSpace,
  NonPositiveCellSize,
  InsufficientSamples,
  SeedOutsideFreeSpace,
  DegenerateBucket,
  InvalidStrategy,
  InvalidConfig,
  ParseError,
  ValidationError,
  NoPolygonFound,
  IoError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception. `cause` carries
// the underlying geometry code when a higher layer wraps it (for example a
// ValidationError raised while loading a self-intersecting ring).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<ErrorCode> cause = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<ErrorCode> cause() const noexcept { return cause_; }
  // The most specific code available: the cause if set, else the code.
  ErrorCode root_code() const noexcept { return cause_.value_or(code_); }

 private:
  ErrorCode code_;
  std::optional<ErrorCode> cause_;
};

}  // namespace axialgen
