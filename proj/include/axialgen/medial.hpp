#pragma once

// Discrete medial axes of the free space: the Voronoi diagram of densified
// boundary samples, filtered down to the edges separating distinct walls.

#include <utility>
#include <vector>

#include "axialgen/geom.hpp"

namespace axialgen {

struct BoundarySample {
  Point2 pos;
  int feature_id = 0;  // ring index: 0 = outer, 1.. = holes
  int arc_index = 0;   // ordinal position along the ring
};

struct MedialVertex {
  Point2 pos;
  std::vector<BoundarySample> associated;
  double clearance = 0.0;  // mean distance to the associated samples
  int id = 0;
};

struct MedialAxisGraph {
  std::vector<MedialVertex> vertices;
  std::vector<std::pair<int, int>> edges;
  double cell_size = 0.0;
  // The samples the graph was built from (the candidate associated points).
  std::vector<BoundarySample> samples;

  double total_length() const;
  std::vector<std::vector<int>> adjacency() const;
};

// One third of the narrowest gap between closed spaces or between a closed
// space and the outer boundary. Without holes, one third of the narrowest
// width of the outer ring (closest pair of non-adjacent edges).
double auto_cell_size(const FreeSpaceMap& map);

std::vector<BoundarySample> densify_boundary(const FreeSpaceMap& map, double cell_size);

// Samples closer than this along a ring are treated as the same wall when
// filtering Voronoi edges.
inline constexpr int kMinArcSeparation = 1;

MedialAxisGraph build_medial_axes(const FreeSpaceMap& map,
                                  const std::vector<BoundarySample>& samples,
                                  double cell_size);

// Splits edges longer than four times the average medial width (twice the
// mean clearance) until every edge is within that spacing.
MedialAxisGraph densify_medial_vertices(const MedialAxisGraph& graph, const FreeSpaceMap& map);

// densify_boundary + build_medial_axes + densify_medial_vertices.
MedialAxisGraph medial_axes(const FreeSpaceMap& map, double cell_size);

}  // namespace axialgen
