#include "axialgen/geom.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace axialgen {

Point2::Point2(double px, double py) : x(px), y(py) {
  if (!std::isfinite(px) || !std::isfinite(py)) {
    throw Error(ErrorCode::NonFiniteCoordinate, "coordinates must be finite");
  }
}

Point2 Segment::direction() const {
  const Point2 d = b - a;
  const double n = norm(d);
  return n > 0 ? d * (1.0 / n) : Point2{};
}

Segment make_segment(Point2 a, Point2 b, double tol) {
  if (!(distance(a, b) > tol)) {
    throw Error(ErrorCode::DegenerateSegment, "segment endpoints coincide");
  }
  return Segment(a, b);
}

Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  return distance(p, closest_point_on_segment(p, a, b));
}

namespace {

int orient(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool proper_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

double segment_segment_distance(Point2 a, Point2 b, Point2 c, Point2 d) {
  if (proper_cross(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d),
                   point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b),
                   point_segment_distance(d, a, b)});
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d, double tol) {
  return segment_segment_distance(a, b, c, d) <= tol;
}

double signed_area(const Ring& ring) {
  double s = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    s += cross(ring[i], ring[(i + 1) % n]);
  }
  return 0.5 * s;
}

double ring_perimeter(const Ring& ring) {
  double s = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    s += distance(ring[i], ring[(i + 1) % ring.size()]);
  }
  return s;
}

bool ring_is_simple(const Ring& ring, double tol) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i], b = ring[(i + 1) % n], c = ring[(i + 2) % n];
    // Adjacent edges folding back onto each other.
    if (std::abs(cross(b - a, c - b)) <= tol * norm(c - b) && dot(b - a, c - b) < 0) {
      return false;
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a, b, ring[j], ring[(j + 1) % n], tol)) return false;
    }
  }
  return true;
}

double distance_to_ring(Point2 p, const Ring& ring) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    best = std::min(best, point_segment_distance(p, ring[i], ring[(i + 1) % ring.size()]));
  }
  return best;
}

namespace {

bool crossing_test(Point2 p, const Ring& ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = ring[i], b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

enum class Location { Outside, Boundary, Inside };

Location locate(Point2 p, const Ring& ring, double tol) {
  if (distance_to_ring(p, ring) <= tol) return Location::Boundary;
  return crossing_test(p, ring) ? Location::Inside : Location::Outside;
}

// Parameters t where the line p + t*d meets the segment ce. Collinear
// overlaps contribute both segment endpoints.
template <typename Sink>
void line_params(Point2 p, Point2 d, Point2 c, Point2 e, double tol, Sink&& sink) {
  const Point2 ce = e - c;
  const double dn = norm(d), cn = norm(ce);
  if (cn <= 0 || dn <= 0) return;
  const double denom = cross(d, ce);
  if (std::abs(denom) <= 1e-12 * dn * cn) {
    if (std::abs(cross(d, c - p)) / dn <= tol) {
      const double d2 = dn * dn;
      sink(dot(c - p, d) / d2);
      sink(dot(e - p, d) / d2);
    }
    return;
  }
  const Point2 cp = c - p;
  const double t = cross(cp, ce) / denom;
  const double u = cross(cp, d) / denom;
  const double tol_u = tol / cn;
  if (u >= -tol_u && u <= 1.0 + tol_u) sink(t);
}

struct Param {
  double t;
  int edge;
};

void sort_unique(std::vector<Param>& params, double tol_t) {
  std::sort(params.begin(), params.end(), [](const Param& l, const Param& r) {
    return l.t < r.t || (l.t == r.t && l.edge < r.edge);
  });
  std::vector<Param> out;
  out.reserve(params.size());
  for (const Param& q : params) {
    if (!out.empty() && q.t - out.back().t <= tol_t) {
      if (out.back().edge < 0) out.back().edge = q.edge;
      continue;
    }
    out.push_back(q);
  }
  params.swap(out);
}

bool strictly_in_ring(Point2 p, const Ring& ring, double tol) {
  return locate(p, ring, tol) == Location::Inside;
}

}  // namespace

bool point_in_ring(Point2 p, const Ring& ring, double tol) {
  return locate(p, ring, tol) != Location::Outside;
}

BBox bounding_box(const Ring& ring) {
  BBox b{ring.front().x, ring.front().y, ring.front().x, ring.front().y};
  for (const Point2& p : ring) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

namespace {

void clean_ring(Ring& ring) {
  while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  Ring out;
  out.reserve(ring.size());
  for (const Point2& p : ring) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  ring.swap(out);
  if (ring.size() < 3) {
    throw Error(ErrorCode::DegenerateRing, "ring needs at least 3 distinct vertices");
  }
}

bool rings_touch(const Ring& r, const Ring& s, double tol) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (segments_intersect(r[i], r[(i + 1) % r.size()], s[j], s[(j + 1) % s.size()], tol)) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

FreeSpaceMap build_free_space(Ring outer, std::vector<Ring> holes) {
  clean_ring(outer);
  for (Ring& h : holes) clean_ring(h);

  FreeSpaceMap map;
  map.bbox_ = bounding_box(outer);
  map.epsilon_ = 1e-9 * map.bbox_.diagonal();
  const double eps = map.epsilon_;

  auto check_ring = [eps](const Ring& r, const char* what) {
    if (std::abs(signed_area(r)) <= eps * eps && r.size() == 3) {
      throw Error(ErrorCode::DegenerateRing, std::string(what) + " ring has zero area");
    }
    if (!ring_is_simple(r, eps)) {
      throw Error(ErrorCode::SelfIntersectingRing, std::string(what) + " ring is not simple");
    }
    if (std::abs(signed_area(r)) <= eps * eps) {
      throw Error(ErrorCode::DegenerateRing, std::string(what) + " ring has zero area");
    }
  };
  check_ring(outer, "outer");
  for (const Ring& h : holes) check_ring(h, "hole");

  for (std::size_t i = 0; i < holes.size(); ++i) {
    const Ring& h = holes[i];
    if (rings_touch(h, outer, eps) ||
        !std::all_of(h.begin(), h.end(),
                     [&](Point2 p) { return strictly_in_ring(p, outer, eps); })) {
      throw Error(ErrorCode::HoleOutsideOuter,
                  "hole " + std::to_string(i) + " is not strictly inside the outer ring");
    }
  }
  for (std::size_t i = 0; i < holes.size(); ++i) {
    for (std::size_t j = i + 1; j < holes.size(); ++j) {
      if (rings_touch(holes[i], holes[j], eps)) {
        throw Error(ErrorCode::OverlappingHoles,
                    "holes " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
      if (strictly_in_ring(holes[i].front(), holes[j], eps) ||
          strictly_in_ring(holes[j].front(), holes[i], eps)) {
        throw Error(ErrorCode::NestedHoles,
                    "holes " + std::to_string(i) + " and " + std::to_string(j) + " are nested");
      }
    }
  }

  if (signed_area(outer) < 0) std::reverse(outer.begin(), outer.end());
  for (Ring& h : holes) {
    if (signed_area(h) > 0) std::reverse(h.begin(), h.end());
  }

  map.free_area_ = signed_area(outer);
  for (const Ring& h : holes) map.free_area_ += signed_area(h);

  map.rings_.reserve(holes.size() + 1);
  map.rings_.push_back(std::move(outer));
  for (Ring& h : holes) map.rings_.push_back(std::move(h));

  for (std::size_t r = 0; r < map.rings_.size(); ++r) {
    const Ring& ring = map.rings_[r];
    for (std::size_t i = 0; i < ring.size(); ++i) {
      map.edges_.push_back({ring[i], ring[(i + 1) % ring.size()], static_cast<int>(r),
                            static_cast<int>(i)});
    }
  }
  return map;
}

bool contains(const FreeSpaceMap& map, Point2 p) {
  const double eps = map.epsilon();
  if (!point_in_ring(p, map.outer(), eps)) return false;
  for (const Ring& h : map.holes()) {
    if (strictly_in_ring(p, h, eps)) return false;
  }
  return true;
}

double distance_to_boundary(const FreeSpaceMap& map, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const BoundaryEdge& e : map.edges()) {
    best = std::min(best, point_segment_distance(p, e.a, e.b));
  }
  return best;
}

namespace {

std::vector<Param> map_line_params(const FreeSpaceMap& map, Point2 p, Point2 d) {
  std::vector<Param> params;
  const double eps = map.epsilon();
  const auto edges = map.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    line_params(p, d, edges[i].a, edges[i].b, eps,
                [&](double t) { params.push_back({t, static_cast<int>(i)}); });
  }
  return params;
}

}  // namespace

bool segment_in_free_space(const FreeSpaceMap& map, Point2 a, Point2 b) {
  if (!contains(map, a) || !contains(map, b)) return false;
  const Point2 d = b - a;
  const double len = norm(d);
  if (len <= map.epsilon()) return true;
  std::vector<Param> params = map_line_params(map, a, d);
  params.push_back({0.0, -1});
  params.push_back({1.0, -1});
  std::erase_if(params, [](const Param& q) { return q.t < 0.0 || q.t > 1.0; });
  sort_unique(params, map.epsilon() / len);
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    if (!contains(map, lerp(a, b, 0.5 * (params[i].t + params[i + 1].t)))) return false;
  }
  return true;
}

ChordExtent chord_extent(const FreeSpaceMap& map, Point2 p, Point2 unit_dir) {
  std::vector<Param> params = map_line_params(map, p, unit_dir);
  params.push_back({0.0, -1});
  const double eps = map.epsilon();
  sort_unique(params, eps);

  std::size_t i0 = 0;
  for (std::size_t i = 1; i < params.size(); ++i) {
    if (std::abs(params[i].t) < std::abs(params[i0].t)) i0 = i;
  }
  auto inside = [&](std::size_t i) {
    return contains(map, p + unit_dir * (0.5 * (params[i].t + params[i + 1].t)));
  };

  ChordExtent ext;
  std::size_t hi = i0;
  while (hi + 1 < params.size() && inside(hi)) ++hi;
  std::size_t lo = i0;
  while (lo > 0 && inside(lo - 1)) --lo;
  ext.t_max = std::max(0.0, params[hi].t);
  ext.t_min = std::min(0.0, params[lo].t);
  ext.max_edge = params[hi].edge;
  ext.min_edge = params[lo].edge;
  return ext;
}

Ray cast_ray(const FreeSpaceMap& map, Point2 p, Point2 direction) {
  if (!contains(map, p)) {
    throw Error(ErrorCode::PointOutsideFreeSpace, "ray origin is not in free space");
  }
  const double n = norm(direction);
  if (!(n > 0)) throw Error(ErrorCode::DegenerateSegment, "zero ray direction");
  const Point2 d = direction * (1.0 / n);
  const ChordExtent ext = chord_extent(map, p, d);
  Ray ray;
  ray.seg = Segment(p + d * ext.t_min, p + d * ext.t_max);
  ray.origin = p;
  ray.length = ext.t_max - ext.t_min;
  if (ray.length <= map.epsilon()) {
    throw Error(ErrorCode::DegenerateSegment, "no free-space chord through point");
  }
  return ray;
}

namespace {

// Point where the ray p + t*dir meets the supporting line of edge e.
bool ray_line_hit(Point2 p, Point2 dir, const BoundaryEdge& e, Point2& out) {
  const Point2 ce = e.b - e.a;
  const double denom = cross(dir, ce);
  if (std::abs(denom) <= 1e-12 * norm(ce)) return false;
  const double t = cross(e.a - p, ce) / denom;
  if (t < 0) return false;
  out = p + dir * t;
  return true;
}

}  // namespace

Isovist compute_isovist(const FreeSpaceMap& map, Point2 viewpoint) {
  if (!contains(map, viewpoint)) {
    throw Error(ErrorCode::ViewpointOutsideFreeSpace, "viewpoint is not in free space");
  }
  const double eps = map.epsilon();

  struct Event {
    double angle;
    double dist;
    Point2 dir;
  };
  std::vector<Event> events;
  for (std::size_t r = 0; r < map.ring_count(); ++r) {
    for (const Point2& v : map.ring(r)) {
      const Point2 d = v - viewpoint;
      const double len = norm(d);
      if (len <= eps) continue;
      events.push_back({std::atan2(d.y, d.x), len, d * (1.0 / len)});
    }
  }
  // Ties on angle resolve by distance so the nearest vertex defines the
  // shared direction.
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.angle < b.angle || (a.angle == b.angle && a.dist < b.dist);
  });
  std::vector<Event> groups;
  for (const Event& e : events) {
    if (!groups.empty() && e.angle - groups.back().angle <= 1e-12) continue;
    groups.push_back(e);
  }

  double min_gap = 2 * std::numbers::pi;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double next = i + 1 < groups.size() ? groups[i + 1].angle
                                              : groups.front().angle + 2 * std::numbers::pi;
    min_gap = std::min(min_gap, next - groups[i].angle);
  }
  const double delta = std::min(1e-6, 0.25 * min_gap);

  const auto edges = map.edges();
  auto limit_point = [&](const Event& g, double offset) {
    const double c = std::cos(offset), s = std::sin(offset);
    const Point2 dir{g.dir.x * c - g.dir.y * s, g.dir.x * s + g.dir.y * c};
    const ChordExtent ext = chord_extent(map, viewpoint, dir);
    Point2 hit = viewpoint + dir * ext.t_max;
    if (ext.max_edge >= 0) {
      Point2 limit;
      if (ray_line_hit(viewpoint, g.dir, edges[ext.max_edge], limit) &&
          distance(limit, hit) <= 1e-3 * map.bbox().diagonal()) {
        hit = limit;
      }
    }
    return hit;
  };

  Isovist iso;
  iso.viewpoint = viewpoint;
  auto push = [&](Point2 q) {
    if (iso.boundary.empty() || distance(iso.boundary.back(), q) > 10 * eps) {
      iso.boundary.push_back(q);
    }
  };
  for (const Event& g : groups) {
    push(limit_point(g, -delta));
    push(limit_point(g, +delta));
  }
  while (iso.boundary.size() > 1 && distance(iso.boundary.front(), iso.boundary.back()) <= 10 * eps) {
    iso.boundary.pop_back();
  }
  iso.area = signed_area(iso.boundary);
  return iso;
}

double polygon_area(const Polygon& poly) {
  double a = std::abs(signed_area(poly.outer));
  for (const Ring& h : poly.holes) a -= std::abs(signed_area(h));
  return a;
}

bool point_in_polygon(Point2 p, const Polygon& poly, double tol) {
  if (!point_in_ring(p, poly.outer, tol)) return false;
  for (const Ring& h : poly.holes) {
    if (strictly_in_ring(p, h, tol)) return false;
  }
  return true;
}

namespace {

template <typename Inside>
double measure_inside(const Segment& seg, const std::vector<const Ring*>& rings, double tol,
                      Inside&& inside) {
  const Point2 d = seg.b - seg.a;
  const double len = norm(d);
  if (len <= 0) return 0.0;
  std::vector<Param> params{{0.0, -1}, {1.0, -1}};
  for (const Ring* ring : rings) {
    const std::size_t n = ring->size();
    for (std::size_t i = 0; i < n; ++i) {
      line_params(seg.a, d, (*ring)[i], (*ring)[(i + 1) % n], tol, [&](double t) {
        if (t > 0.0 && t < 1.0) params.push_back({t, -1});
      });
    }
  }
  sort_unique(params, tol / len);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    const double t0 = params[i].t, t1 = params[i + 1].t;
    if (inside(lerp(seg.a, seg.b, 0.5 * (t0 + t1)))) total += (t1 - t0) * len;
  }
  return total;
}

double scale_tol(const Segment& seg, const Ring& ring) {
  if (ring.empty()) return 0.0;
  return 1e-9 * (bounding_box(ring).diagonal() + seg.length());
}

}  // namespace

double length_inside(const Segment& seg, const Ring& poly) {
  if (poly.size() < 3) return 0.0;
  const double tol = scale_tol(seg, poly);
  return measure_inside(seg, {&poly}, tol, [&](Point2 q) { return point_in_ring(q, poly, tol); });
}

double length_inside(const Segment& seg, std::span<const Polygon> parts) {
  double total = 0.0;
  for (const Polygon& part : parts) {
    if (part.outer.size() < 3) continue;
    const double tol = scale_tol(seg, part.outer);
    std::vector<const Ring*> rings{&part.outer};
    for (const Ring& h : part.holes) rings.push_back(&h);
    total += measure_inside(seg, rings, tol,
                            [&](Point2 q) { return point_in_polygon(q, part, tol); });
  }
  return total;
}

}  // namespace axialgen
