#pragma once

// Buckets: the polygon around a ray chained from its endpoints and the
// associated points of the medial axes it cuts.

#include <array>
#include <utility>
#include <vector>

#include "axialgen/clip.hpp"
#include "axialgen/geom.hpp"
#include "axialgen/medial.hpp"

namespace axialgen {

struct BucketTrace {
  int ray_id = 0;
  std::vector<Point2> crossings;  // along-ray order
  std::vector<MedialVertex> branch_points;
  // e11, e12 flank the first endpoint, e21, e22 the second.
  std::array<Point2, 4> endpoint_associates;
  std::vector<std::pair<Point2, Point2>> branch_associates;
  // Associates of every medial vertex whose clearance disk reaches the ray.
  std::vector<Point2> flank_associates;
};

struct Bucket {
  int owner_ray_id = 0;
  Ring boundary;  // outer ring of the largest part
  double area = 0.0;
  Region region;  // the bucket clipped to free space
};

BucketTrace trace_crossings(const Ray& ray, const MedialAxisGraph& graph);

// Throws DegenerateBucket when fewer than 3 distinct chain points remain.
Bucket build_bucket(const Ray& ray, const BucketTrace& trace, const FreeSpaceMap& map);

Bucket bucket_of(const Ray& ray, const MedialAxisGraph& graph, const FreeSpaceMap& map);

// Fraction of the candidate's length inside the bucket.
double ray_bucket_overlap(const Ray& candidate, const Bucket& b);

}  // namespace axialgen
