#pragma once

// Polygon boolean operations (intersection, union, validity) backed by
// Boost.Geometry.

#include <span>
#include <vector>

#include "axialgen/geom.hpp"

namespace axialgen {

using Region = std::vector<Polygon>;

// Free space as a region (outer ring with holes).
Region free_space_region(const FreeSpaceMap& map);

Region intersect(const Region& a, const Region& b);
Region unite(const Region& a, const Region& b);
double region_area(const Region& r);

// True if the ring is a valid simple polygon boundary (any orientation).
bool ring_is_valid(const Ring& ring);

Ring convex_hull(const std::vector<Point2>& points);

Region clip_to_free_space(const Ring& ring, const FreeSpaceMap& map);
Region clip_to_free_space(const Region& region, const FreeSpaceMap& map);

}  // namespace axialgen
