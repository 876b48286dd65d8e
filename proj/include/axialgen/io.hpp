#pragma once

// Map ingestion (GeoJSON, WKT), GeoJSON export of axial maps and medial axes,
// and SVG rendering.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "axialgen/reduce.hpp"

namespace axialgen {

enum class MapFormat { GeoJson, Wkt };

// .wkt (any case) is WKT, anything else GeoJSON.
MapFormat format_for_path(const std::string& path);

// First polygon found, validated with build_free_space. Geometry failures are
// rethrown as ValidationError with the geometry code as cause. A multi-polygon
// with more than one member is a ValidationError.
FreeSpaceMap parse_map(std::string_view text, MapFormat format);
FreeSpaceMap load_map(const std::string& path, std::optional<MapFormat> format = std::nullopt);

enum class Output { Axial, Medial, Svg, Stats };

std::string to_string(Output o);
Output parse_output(std::string_view name);  // axial, medial, svg, stats

// Writes axial.geojson (LineStrings with id, length, selection_order) and
// buckets.geojson when Output::Axial is requested. Creates dir if needed.
// Returns the written paths. IoError on failure.
std::vector<std::string> export_axial_map(const AxialMap& axial, const std::string& dir,
                                          const std::set<Output>& outputs);

std::string axial_geojson(const AxialMap& axial);
std::string buckets_geojson(const AxialMap& axial);
// Edges as LineStrings, vertices as Points with clearance.
std::string medial_geojson(const MedialAxisGraph& graph);

// Line geometries of a LineString FeatureCollection, in file order.
std::vector<Segment> load_lines(const std::string& path);

void write_file(const std::string& path, const std::string& content);  // IoError
void ensure_directory(const std::string& dir);                          // IoError

struct SvgLayers {
  const MedialAxisGraph* medial = nullptr;
  const std::vector<Ray>* rays = nullptr;
  const std::vector<Bucket>* buckets = nullptr;
  const std::vector<Ray>* axial = nullptr;
};

// One <g> per present layer, bottom to top: map, medial, buckets, rays,
// axial. Viewport is the bounding box padded by 5%.
std::string render_svg(const FreeSpaceMap& map, const SvgLayers& layers = {});

}  // namespace axialgen
