#include "axialgen/ridge.hpp"

#include <cmath>
#include <numbers>

#include "axialgen/parallel.hpp"

namespace axialgen {

void RidgeConfig::validate() const {
  if (!(angular_step > 0.0 && angular_step <= 10.0)) {
    throw Error(ErrorCode::InvalidConfig, "angular_step must be in (0, 10] degrees");
  }
  if (discretization_step && !(*discretization_step > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "discretization_step must be positive");
  }
}

Ray isovist_ridge(const FreeSpaceMap& map, Point2 viewpoint, const RidgeConfig& cfg) {
  cfg.validate();
  if (!contains(map, viewpoint)) {
    throw Error(ErrorCode::ViewpointOutsideFreeSpace, "viewpoint is not in free space");
  }
  // From a wall point some directions have no chord at all; skip them.
  Point2 best_dir{1.0, 0.0};
  double best_len = -1.0;
  for (long k = 0;; ++k) {
    const double deg = static_cast<double>(k) * cfg.angular_step;
    if (deg >= 180.0 - 1e-9) break;
    const double rad = deg * std::numbers::pi / 180.0;
    // Exact axis directions keep axis-aligned chords exact.
    Point2 dir{std::cos(rad), std::sin(rad)};
    if (deg == 90.0) dir = {0.0, 1.0};
    const ChordExtent ext = chord_extent(map, viewpoint, dir);
    const double len = ext.t_max - ext.t_min;
    if (len > best_len + map.epsilon()) {
      best_len = len;
      best_dir = dir;
    }
  }
  return cast_ray(map, viewpoint, best_dir);
}

std::vector<Ray> dedupe_rays(const FreeSpaceMap& map, std::vector<Ray> rays) {
  const double eps = map.epsilon();
  auto same = [&](const Ray& x, const Ray& y) {
    const bool direct = distance(x.seg.a, y.seg.a) <= eps && distance(x.seg.b, y.seg.b) <= eps;
    const bool flipped = distance(x.seg.a, y.seg.b) <= eps && distance(x.seg.b, y.seg.a) <= eps;
    return direct || flipped;
  };
  std::vector<Ray> out;
  for (Ray& r : rays) {
    bool dup = false;
    for (const Ray& kept : out) {
      if (std::abs(kept.length - r.length) <= 2 * eps && same(kept, r)) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
  return out;
}

std::vector<Ray> rays_from_medial(const FreeSpaceMap& map, const MedialAxisGraph& graph,
                                  const RidgeConfig& cfg) {
  cfg.validate();
  std::vector<Ray> rays(graph.vertices.size());
  parallel_for(rays.size(), [&](std::size_t i) {
    rays[i] = isovist_ridge(map, graph.vertices[i].pos, cfg);
  });
  return dedupe_rays(map, std::move(rays));
}

std::vector<Ray> rays_from_seed_line(const FreeSpaceMap& map, const Segment& seed,
                                     const RidgeConfig& cfg) {
  cfg.validate();
  // Start from the midpoint if it is free, else the first free point found
  // walking the seed.
  std::optional<Point2> start;
  if (contains(map, seed.midpoint())) start = seed.midpoint();
  for (int i = 0; !start && i <= 1024; ++i) {
    const Point2 p = lerp(seed.a, seed.b, i / 1024.0);
    if (contains(map, p)) start = p;
  }
  if (!start) throw Error(ErrorCode::SeedOutsideFreeSpace, "seed line misses the free space");

  const Ray first = cast_ray(map, *start, seed.direction());
  const double step = cfg.discretization_step ? *cfg.discretization_step : auto_cell_size(map);
  std::vector<Point2> points;
  for (long k = 1; static_cast<double>(k) * step < first.length; ++k) {
    points.push_back(lerp(first.seg.a, first.seg.b, static_cast<double>(k) * step / first.length));
  }
  std::vector<Ray> rays(points.size() + 1);
  rays[0] = first;
  parallel_for(points.size(), [&](std::size_t i) {
    rays[i + 1] = isovist_ridge(map, points[i], cfg);
  });
  return dedupe_rays(map, std::move(rays));
}

}  // namespace axialgen
