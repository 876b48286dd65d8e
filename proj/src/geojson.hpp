#pragma once

// GeoJSON encoding shared by the exporters and the HTTP service.

#include <json.hpp>

#include "axialgen/bucket.hpp"
#include "axialgen/medial.hpp"

namespace axialgen::geojson {

using json = nlohmann::json;

json position(Point2 p);
json ring(const Ring& r);  // closed
json polygon(const Polygon& p);
json region(const Region& r);  // Polygon for one part, MultiPolygon otherwise
json line(const Segment& s);
json map_polygon(const FreeSpaceMap& map);
json feature(json geometry, json properties = json::object());
json collection(json features = json::array());

json ray_feature(const Ray& r);
json medial(const MedialAxisGraph& g);

// Throws ParseError on malformed input.
Point2 to_point(const json& j);
Segment to_segment(const json& j);  // LineString geometry or [[x,y],[x,y]]

// First polygon in any GeoJSON object (geometry, Feature, collections).
// NoPolygonFound if none; ValidationError for a multi-polygon of several.
FreeSpaceMap to_map(const json& j);

}  // namespace axialgen::geojson
