#include "axialgen/reduce.hpp"

#include <algorithm>

#include "axialgen/parallel.hpp"

namespace axialgen {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Global: return "global";
    case Strategy::Bfs: return "bfs";
    case Strategy::Dfs: return "dfs";
    case Strategy::LineSeeded: return "line_seeded";
  }
  return "global";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "global") return Strategy::Global;
  if (name == "bfs") return Strategy::Bfs;
  if (name == "dfs") return Strategy::Dfs;
  if (name == "line_seeded" || name == "line-seeded") return Strategy::LineSeeded;
  throw Error(ErrorCode::InvalidStrategy, "unknown strategy '" + std::string(name) + "'");
}

void ReduceConfig::validate() const {
  if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "overlap_threshold must be in (0, 1]");
  }
  if (!(coverage_target > 0.0 && coverage_target <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "coverage_target must be in (0, 1]");
  }
}

Reducer::Reducer(std::vector<Ray> rays, const MedialAxisGraph& graph, const FreeSpaceMap& map,
                 const ReduceConfig& cfg)
    : rays_(std::move(rays)), graph_(graph), map_(map), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.strategy == Strategy::LineSeeded) {
    throw Error(ErrorCode::InvalidStrategy, "line_seeded is not a ray reduction strategy");
  }
  alive_.assign(rays_.size(), 1);
  remaining_ = rays_.size();
}

std::size_t Reducer::connectivity(std::size_t i) const {
  const double tol = map_.epsilon();
  std::size_t n = 0;
  for (std::size_t j = 0; j < rays_.size(); ++j) {
    if (j == i || !alive_[j]) continue;
    if (segments_intersect(rays_[i].seg.a, rays_[i].seg.b, rays_[j].seg.a, rays_[j].seg.b, tol)) {
      ++n;
    }
  }
  return n;
}

namespace {

// Longest within tol, then the smaller midpoint (x, then y), then the lower id.
bool midpoint_before(const Ray& a, const Ray& b, double tol) {
  const Point2 ma = a.seg.midpoint(), mb = b.seg.midpoint();
  if (std::abs(ma.x - mb.x) > tol) return ma.x < mb.x;
  if (std::abs(ma.y - mb.y) > tol) return ma.y < mb.y;
  return a.id < b.id;
}

}  // namespace

std::optional<std::size_t> Reducer::longest(const std::vector<std::size_t>& pool) const {
  if (pool.empty()) return std::nullopt;
  const double tol = map_.epsilon();
  double top = 0.0;
  for (std::size_t i : pool) top = std::max(top, rays_[i].length);
  std::vector<std::size_t> tied;
  for (std::size_t i : pool) {
    if (rays_[i].length >= top - tol) tied.push_back(i);
  }
  if (tied.size() > 1 && cfg_.strategy != Strategy::Global && cfg_.connectivity_tiebreak) {
    std::vector<std::size_t> conn(tied.size());
    for (std::size_t k = 0; k < tied.size(); ++k) conn[k] = connectivity(tied[k]);
    const std::size_t most = *std::max_element(conn.begin(), conn.end());
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < tied.size(); ++k) {
      if (conn[k] == most) keep.push_back(tied[k]);
    }
    tied.swap(keep);
  }
  std::size_t best = tied.front();
  for (std::size_t i : tied) {
    if (midpoint_before(rays_[i], rays_[best], tol)) best = i;
  }
  return best;
}

std::optional<std::size_t> Reducer::best_child(std::size_t parent) const {
  const double tol = map_.epsilon();
  const Segment& p = rays_[parent].seg;
  std::vector<std::size_t> pool;
  for (std::size_t j = 0; j < rays_.size(); ++j) {
    if (alive_[j] && segments_intersect(p.a, p.b, rays_[j].seg.a, rays_[j].seg.b, tol)) {
      pool.push_back(j);
    }
  }
  return longest(pool);
}

StepResult Reducer::select(std::size_t i) {
  StepResult out;
  out.line = rays_[i];
  out.bucket = bucket_of(rays_[i], graph_, map_);
  std::vector<char> hit(rays_.size(), 0);
  parallel_for(rays_.size(), [&](std::size_t j) {
    if (alive_[j] && ray_bucket_overlap(rays_[j], out.bucket) >= cfg_.overlap_threshold) {
      hit[j] = 1;
    }
  });
  hit[i] = 1;
  for (std::size_t j = 0; j < rays_.size(); ++j) {
    if (!hit[j] || !alive_[j]) continue;
    alive_[j] = 0;
    --remaining_;
    out.removed.push_back(rays_[j].id);
  }
  std::sort(out.removed.begin(), out.removed.end());
  out.remaining = remaining_;
  lines_.push_back(out.line);
  buckets_.push_back(out.bucket);
  return out;
}

std::optional<StepResult> Reducer::step() {
  if (remaining_ == 0) return std::nullopt;
  if (cfg_.strategy != Strategy::Global) {
    while (!open_.empty()) {
      const bool bfs = cfg_.strategy == Strategy::Bfs;
      const std::size_t parent = bfs ? open_.front() : open_.back();
      if (auto c = best_child(parent)) {
        open_.push_back(*c);
        return select(*c);
      }
      if (bfs) {
        open_.erase(open_.begin());
      } else {
        open_.pop_back();
      }
    }
  }
  std::vector<std::size_t> pool;
  for (std::size_t j = 0; j < rays_.size(); ++j) {
    if (alive_[j]) pool.push_back(j);
  }
  const std::size_t i = *longest(pool);
  if (cfg_.strategy != Strategy::Global) open_.push_back(i);
  return select(i);
}

AxialMap Reducer::result() const {
  // Drop a line lying inside a later line's bucket if every ray it absorbs is
  // still absorbed by another kept bucket.
  const std::size_t k = lines_.size();
  std::vector<std::vector<char>> absorbs(k, std::vector<char>(rays_.size(), 0));
  parallel_for(k * rays_.size(), [&](std::size_t n) {
    const std::size_t i = n / rays_.size(), j = n % rays_.size();
    absorbs[i][j] = ray_bucket_overlap(rays_[j], buckets_[i]) >= cfg_.overlap_threshold;
  });
  std::vector<char> keep(k, 1);
  for (std::size_t i = 0; i < k; ++i) {
    bool inside = false;
    for (std::size_t j = 0; j < k && !inside; ++j) {
      inside = j != i && keep[j] &&
               ray_bucket_overlap(lines_[i], buckets_[j]) >= cfg_.overlap_threshold;
    }
    if (!inside) continue;
    bool spare = true;
    for (std::size_t r = 0; r < rays_.size() && spare; ++r) {
      if (!absorbs[i][r]) continue;
      bool other = false;
      for (std::size_t j = 0; j < k && !other; ++j) other = j != i && keep[j] && absorbs[j][r];
      spare = other;
    }
    if (spare) keep[i] = 0;
  }

  AxialMap out;
  for (std::size_t i = 0; i < k; ++i) {
    if (!keep[i]) continue;
    out.lines.push_back(lines_[i]);
    out.buckets.push_back(buckets_[i]);
  }
  out.config = cfg_;
  out.stats.input_ray_count = rays_.size();
  for (const Ray& r : out.lines) out.stats.total_length += r.length;
  out.stats.coverage_fraction = coverage_fraction(out.buckets, map_);
  return out;
}

namespace {

AxialMap run(const std::vector<Ray>& rays, const MedialAxisGraph& graph, const FreeSpaceMap& map,
             const ReduceConfig& cfg) {
  Reducer r(rays, graph, map, cfg);
  while (r.step()) {
  }
  return r.result();
}

}  // namespace

AxialMap reduce_global(const std::vector<Ray>& rays, const MedialAxisGraph& graph,
                       const FreeSpaceMap& map, const ReduceConfig& cfg) {
  ReduceConfig c = cfg;
  c.strategy = Strategy::Global;
  return run(rays, graph, map, c);
}

AxialMap reduce_search(const std::vector<Ray>& rays, const MedialAxisGraph& graph,
                       const FreeSpaceMap& map, const ReduceConfig& cfg) {
  if (cfg.strategy != Strategy::Bfs && cfg.strategy != Strategy::Dfs) {
    throw Error(ErrorCode::InvalidStrategy, "reduce_search needs bfs or dfs");
  }
  return run(rays, graph, map, cfg);
}

namespace {

bool covered(const std::vector<Bucket>& buckets, Point2 p) {
  for (const Bucket& b : buckets) {
    for (const Polygon& part : b.region) {
      if (point_in_polygon(p, part, 0.0)) return true;
    }
  }
  return false;
}

}  // namespace

AxialMap axialgen_line_seeded(const FreeSpaceMap& map, const Segment& seed,
                              const MedialAxisGraph& graph, const RidgeConfig& rcfg,
                              const ReduceConfig& cfg) {
  cfg.validate();
  rcfg.validate();
  ReduceConfig round_cfg = cfg;
  round_cfg.strategy = Strategy::Global;

  std::vector<Ray> pool;
  std::vector<Segment> expanded;
  auto seen = [&](const Segment& s) {
    const double tol = map.epsilon();
    return std::any_of(expanded.begin(), expanded.end(), [&](const Segment& e) {
      return (distance(e.a, s.a) <= tol && distance(e.b, s.b) <= tol) ||
             (distance(e.a, s.b) <= tol && distance(e.b, s.a) <= tol);
    });
  };

  AxialMap out;
  std::vector<Segment> frontier{seed};
  constexpr int kMaxRounds = 10000;
  for (int round = 0; round < kMaxRounds && !frontier.empty(); ++round) {
    for (const Segment& f : frontier) {
      std::vector<Ray> rays = rays_from_seed_line(map, f, rcfg);
      pool.insert(pool.end(), rays.begin(), rays.end());
      expanded.push_back(f);
      if (!rays.empty()) expanded.push_back(rays.front().seg);
    }
    pool = dedupe_rays(map, std::move(pool));
    out = run(pool, graph, map, round_cfg);
    if (out.stats.coverage_fraction >= cfg.coverage_target) break;

    frontier.clear();
    for (const Ray& r : out.lines) {
      if (!seen(r.seg)) frontier.push_back(r.seg);
    }
    if (!frontier.empty()) continue;
    // Stalled: restart from the widest medial vertex no bucket covers whose
    // ridge is new.
    std::vector<const MedialVertex*> open;
    for (const MedialVertex& v : graph.vertices) {
      if (!covered(out.buckets, v.pos)) open.push_back(&v);
    }
    std::stable_sort(open.begin(), open.end(), [](const MedialVertex* a, const MedialVertex* b) {
      return a->clearance > b->clearance;
    });
    for (const MedialVertex* v : open) {
      const Ray r = isovist_ridge(map, v->pos, rcfg);
      if (!seen(r.seg)) {
        frontier.push_back(r.seg);
        break;
      }
    }
  }
  out.config = cfg;
  out.config.strategy = Strategy::LineSeeded;
  return out;
}

double coverage_fraction(const std::vector<Bucket>& buckets, const FreeSpaceMap& map) {
  if (buckets.empty()) return 0.0;
  Region all;
  for (const Bucket& b : buckets) all = all.empty() ? b.region : unite(all, b.region);
  const double area = region_area(clip_to_free_space(all, map));
  return std::clamp(area / map.free_area(), 0.0, 1.0);
}

double coverage_fraction(const AxialMap& axial, const FreeSpaceMap& map) {
  return coverage_fraction(axial.buckets, map);
}

}  // namespace axialgen
