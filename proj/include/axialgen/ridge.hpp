#pragma once

// Isovist ridges: the longest chord through a standing point over a uniform
// angular sweep, generated in batch from medial vertices or along a seed line.

#include <optional>
#include <vector>

#include "axialgen/geom.hpp"
#include "axialgen/medial.hpp"

namespace axialgen {

struct RidgeConfig {
  double angular_step = 1.0;  // degrees, in (0, 10]
  // Spacing of points along a seed line; unset means the auto cell size.
  std::optional<double> discretization_step;

  void validate() const;  // throws InvalidConfig
};

// Directions k*step for k*step < 180 degrees; the longest chord wins, ties to
// the smallest angle.
Ray isovist_ridge(const FreeSpaceMap& map, Point2 viewpoint, const RidgeConfig& cfg = {});

// Drops rays whose unordered endpoint pair matches an earlier ray within
// epsilon, then renumbers ids 0..n-1.
std::vector<Ray> dedupe_rays(const FreeSpaceMap& map, std::vector<Ray> rays);

std::vector<Ray> rays_from_medial(const FreeSpaceMap& map, const MedialAxisGraph& graph,
                                  const RidgeConfig& cfg = {});

std::vector<Ray> rays_from_seed_line(const FreeSpaceMap& map, const Segment& seed,
                                     const RidgeConfig& cfg = {});

}  // namespace axialgen
