#include "axialgen/clip.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_point.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace axialgen {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, /*ClockWise=*/false, /*Closed=*/true>;
using BgMulti = bg::model::multi_polygon<BgPolygon>;
using BgRing = BgPolygon::ring_type;

namespace {

BgRing to_bg(const Ring& ring) {
  BgRing out;
  for (const Point2& p : ring) out.push_back(BgPoint(p.x, p.y));
  if (!ring.empty()) out.push_back(BgPoint(ring.front().x, ring.front().y));
  return out;
}

Ring from_bg(const BgRing& ring) {
  Ring out;
  for (const BgPoint& p : ring) out.push_back(Point2(p.x(), p.y()));
  if (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

BgMulti to_bg(const Region& region) {
  BgMulti multi;
  for (const Polygon& poly : region) {
    BgPolygon p;
    p.outer() = to_bg(poly.outer);
    for (const Ring& h : poly.holes) p.inners().push_back(to_bg(h));
    bg::correct(p);
    multi.push_back(std::move(p));
  }
  return multi;
}

Region from_bg(const BgMulti& multi) {
  Region out;
  for (const BgPolygon& p : multi) {
    Polygon poly;
    poly.outer = from_bg(p.outer());
    for (const BgRing& h : p.inners()) poly.holes.push_back(from_bg(h));
    if (poly.outer.size() >= 3) out.push_back(std::move(poly));
  }
  return out;
}

}  // namespace

Region free_space_region(const FreeSpaceMap& map) {
  Polygon poly;
  poly.outer = map.outer();
  for (const Ring& h : map.holes()) poly.holes.push_back(h);
  return {poly};
}

Region intersect(const Region& a, const Region& b) {
  BgMulti out;
  bg::intersection(to_bg(a), to_bg(b), out);
  return from_bg(out);
}

Region unite(const Region& a, const Region& b) {
  BgMulti out;
  bg::union_(to_bg(a), to_bg(b), out);
  return from_bg(out);
}

double region_area(const Region& r) {
  double total = 0.0;
  for (const Polygon& p : r) total += polygon_area(p);
  return total;
}

bool ring_is_valid(const Ring& ring) {
  if (ring.size() < 3) return false;
  BgPolygon p;
  p.outer() = to_bg(ring);
  bg::correct(p);
  return bg::is_valid(p);
}

Ring convex_hull(const std::vector<Point2>& points) {
  bg::model::multi_point<BgPoint> mp;
  for (const Point2& p : points) mp.push_back(BgPoint(p.x, p.y));
  BgPolygon hull;
  bg::convex_hull(mp, hull);
  return from_bg(hull.outer());
}

Region clip_to_free_space(const Ring& ring, const FreeSpaceMap& map) {
  return clip_to_free_space(Region{Polygon{ring, {}}}, map);
}

Region clip_to_free_space(const Region& region, const FreeSpaceMap& map) {
  return intersect(region, free_space_region(map));
}

}  // namespace axialgen
