#include "geojson.hpp"

namespace axialgen::geojson {

json position(Point2 p) { return json::array({p.x, p.y}); }

json ring(const Ring& r) {
  json out = json::array();
  for (const Point2& p : r) out.push_back(position(p));
  if (!r.empty()) out.push_back(position(r.front()));
  return out;
}

namespace {

json polygon_coords(const Polygon& p) {
  json rings = json::array({ring(p.outer)});
  for (const Ring& h : p.holes) rings.push_back(ring(h));
  return rings;
}

}  // namespace

json polygon(const Polygon& p) { return {{"type", "Polygon"}, {"coordinates", polygon_coords(p)}}; }

json region(const Region& r) {
  if (r.size() == 1) return polygon(r.front());
  json parts = json::array();
  for (const Polygon& p : r) parts.push_back(polygon_coords(p));
  return {{"type", "MultiPolygon"}, {"coordinates", parts}};
}

json line(const Segment& s) {
  return {{"type", "LineString"}, {"coordinates", json::array({position(s.a), position(s.b)})}};
}

json map_polygon(const FreeSpaceMap& map) {
  Polygon p{map.outer(), {map.holes().begin(), map.holes().end()}};
  return polygon(p);
}

json feature(json geometry, json properties) {
  return {{"type", "Feature"}, {"geometry", std::move(geometry)}, {"properties", std::move(properties)}};
}

json collection(json features) {
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

json ray_feature(const Ray& r) {
  return feature(line(r.seg), {{"id", r.id}, {"length", r.length}});
}

json medial(const MedialAxisGraph& g) {
  json fs = json::array();
  for (const auto& [a, b] : g.edges) {
    fs.push_back(feature(line(Segment(g.vertices[a].pos, g.vertices[b].pos)),
                         {{"kind", "edge"}, {"from", a}, {"to", b}}));
  }
  for (const MedialVertex& v : g.vertices) {
    fs.push_back(feature({{"type", "Point"}, {"coordinates", position(v.pos)}},
                         {{"kind", "vertex"}, {"id", v.id}, {"clearance", v.clearance}}));
  }
  json out = collection(std::move(fs));
  out["properties"] = {{"cell_size", g.cell_size}};
  return out;
}

Point2 to_point(const json& j) {
  if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::ParseError, "expected a position [x, y]");
  }
  return Point2(j[0].get<double>(), j[1].get<double>());
}

Segment to_segment(const json& j) {
  const json& c = j.is_object() ? j.value("coordinates", json()) : j;
  if (!c.is_array() || c.size() != 2) {
    throw Error(ErrorCode::ParseError, "expected a segment of two positions");
  }
  return Segment(to_point(c[0]), to_point(c[1]));
}

namespace {

Ring to_ring(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "expected a ring of positions");
  Ring r;
  for (const json& p : j) r.push_back(to_point(p));
  return r;
}

FreeSpaceMap from_rings(const json& rings) {
  if (!rings.is_array() || rings.empty()) {
    throw Error(ErrorCode::ParseError, "polygon has no rings");
  }
  try {
    Ring outer = to_ring(rings[0]);
    std::vector<Ring> holes;
    for (std::size_t i = 1; i < rings.size(); ++i) holes.push_back(to_ring(rings[i]));
    return build_free_space(std::move(outer), std::move(holes));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ValidationError, e.what(), e.code());
  }
}

const json* find_polygon(const json& j, bool& multi) {
  if (!j.is_object()) return nullptr;
  const std::string type = j.value("type", "");
  if (type == "Polygon") return &j.at("coordinates");
  if (type == "MultiPolygon") {
    const json& c = j.at("coordinates");
    if (c.size() > 1) multi = true;
    return c.size() == 1 ? &c[0] : nullptr;
  }
  const char* list = type == "FeatureCollection"    ? "features"
                     : type == "GeometryCollection" ? "geometries"
                                                    : nullptr;
  if (list && j.contains(list)) {
    for (const json& item : j.at(list)) {
      if (const json* p = find_polygon(item, multi)) return p;
      if (multi) return nullptr;
    }
  }
  if (type == "Feature" && j.contains("geometry")) return find_polygon(j.at("geometry"), multi);
  return nullptr;
}

}  // namespace

FreeSpaceMap to_map(const json& j) {
  bool multi = false;
  const json* rings = nullptr;
  try {
    rings = find_polygon(j, multi);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (multi) {
    throw Error(ErrorCode::ValidationError, "multi-polygon input: one open space per run");
  }
  if (!rings) throw Error(ErrorCode::NoPolygonFound, "no polygon in input");
  return from_rings(*rings);
}

}  // namespace axialgen::geojson
