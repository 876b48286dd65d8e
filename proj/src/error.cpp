#include "axialgen/error.hpp"

namespace axialgen {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::DegenerateRing: return "DegenerateRing";
    case ErrorCode::SelfIntersectingRing: return "SelfIntersectingRing";
    case ErrorCode::HoleOutsideOuter: return "HoleOutsideOuter";
    case ErrorCode::OverlappingHoles: return "OverlappingHoles";
    case ErrorCode::NestedHoles: return "NestedHoles";
    case ErrorCode::ViewpointOutsideFreeSpace: return "ViewpointOutsideFreeSpace";
    case ErrorCode::PointOutsideFreeSpace: return "PointOutsideFreeSpace";
    case ErrorCode::NonPositiveCellSize: return "NonPositiveCellSize";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::SeedOutsideFreeSpace: return "SeedOutsideFreeSpace";
    case ErrorCode::DegenerateBucket: return "DegenerateBucket";
    case ErrorCode::InvalidStrategy: return "InvalidStrategy";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::NoPolygonFound: return "NoPolygonFound";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<ErrorCode> cause)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      cause_(cause) {}

}  // namespace axialgen
