#include "axialgen/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "geojson.hpp"

namespace axialgen {

namespace fs = std::filesystem;
namespace bg = boost::geometry;
using json = nlohmann::json;

MapFormat format_for_path(const std::string& path) {
  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".wkt" ? MapFormat::Wkt : MapFormat::GeoJson;
}

namespace {

using WktPoint = bg::model::d2::point_xy<double>;
using WktPolygon = bg::model::polygon<WktPoint>;
using WktMulti = bg::model::multi_polygon<WktPolygon>;

Ring from_wkt(const WktPolygon::ring_type& r) {
  Ring out;
  for (const WktPoint& p : r) out.push_back(Point2(p.x(), p.y()));
  return out;
}

FreeSpaceMap from_wkt(const WktPolygon& p) {
  std::vector<Ring> holes;
  for (const auto& h : p.inners()) holes.push_back(from_wkt(h));
  try {
    return build_free_space(from_wkt(p.outer()), std::move(holes));
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, e.what(), e.code());
  }
}

FreeSpaceMap parse_wkt(std::string_view text) {
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  const std::size_t last = text.find_last_not_of(" \t\r\n");
  std::string s(first == std::string_view::npos ? "" : text.substr(first, last - first + 1));
  std::size_t i = 0;
  std::string head;
  while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
    head += static_cast<char>(std::toupper(static_cast<unsigned char>(s[i++])));
  }
  try {
    if (head == "POLYGON") {
      WktPolygon p;
      bg::read_wkt(s, p);
      if (p.outer().empty()) throw Error(ErrorCode::NoPolygonFound, "empty polygon");
      return from_wkt(p);
    }
    if (head == "MULTIPOLYGON") {
      WktMulti m;
      bg::read_wkt(s, m);
      if (m.size() > 1) {
        throw Error(ErrorCode::ValidationError, "multi-polygon input: one open space per run");
      }
      if (m.empty()) throw Error(ErrorCode::NoPolygonFound, "empty multi-polygon");
      return from_wkt(m.front());
    }
  } catch (const bg::read_wkt_exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (head.empty()) throw Error(ErrorCode::ParseError, "not WKT");
  throw Error(ErrorCode::NoPolygonFound, "no polygon in input (" + head + ")");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

FreeSpaceMap parse_map(std::string_view text, MapFormat format) {
  if (format == MapFormat::Wkt) return parse_wkt(text);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return geojson::to_map(j);
}

FreeSpaceMap load_map(const std::string& path, std::optional<MapFormat> format) {
  return parse_map(read_file(path), format.value_or(format_for_path(path)));
}

std::string to_string(Output o) {
  switch (o) {
    case Output::Axial: return "axial";
    case Output::Medial: return "medial";
    case Output::Svg: return "svg";
    case Output::Stats: return "stats";
  }
  return "axial";
}

Output parse_output(std::string_view name) {
  for (Output o : {Output::Axial, Output::Medial, Output::Svg, Output::Stats}) {
    if (name == to_string(o)) return o;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown output '" + std::string(name) + "'");
}

std::string axial_geojson(const AxialMap& axial) {
  json fs = json::array();
  for (std::size_t i = 0; i < axial.lines.size(); ++i) {
    const Ray& r = axial.lines[i];
    fs.push_back(geojson::feature(geojson::line(r.seg),
                                  {{"id", r.id}, {"length", r.length}, {"selection_order", i}}));
  }
  return geojson::collection(std::move(fs)).dump(1) + "\n";
}

std::string buckets_geojson(const AxialMap& axial) {
  json fs = json::array();
  for (std::size_t i = 0; i < axial.buckets.size(); ++i) {
    const Bucket& b = axial.buckets[i];
    if (b.region.empty()) continue;
    fs.push_back(geojson::feature(geojson::region(b.region),
                                  {{"owner_ray_id", b.owner_ray_id},
                                   {"area", b.area},
                                   {"selection_order", i}}));
  }
  return geojson::collection(std::move(fs)).dump(1) + "\n";
}

std::string medial_geojson(const MedialAxisGraph& graph) {
  return geojson::medial(graph).dump(1) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "cannot create " + dir);
}

std::vector<std::string> export_axial_map(const AxialMap& axial, const std::string& dir,
                                          const std::set<Output>& outputs) {
  std::vector<std::string> written;
  if (!outputs.count(Output::Axial)) return written;
  ensure_directory(dir);
  const std::string a = (fs::path(dir) / "axial.geojson").string();
  const std::string b = (fs::path(dir) / "buckets.geojson").string();
  write_file(a, axial_geojson(axial));
  write_file(b, buckets_geojson(axial));
  written = {a, b};
  return written;
}

std::vector<Segment> load_lines(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  std::vector<Segment> out;
  try {
    for (const json& f : j.at("features")) {
      const json& g = f.at("geometry");
      if (g.value("type", "") == "LineString") out.push_back(geojson::to_segment(g));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return out;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

// y is flipped so the drawing reads north-up.
std::string xy(Point2 p) { return num(p.x) + "," + num(-p.y); }

void ring_path(std::string& d, const Ring& r) {
  for (std::size_t i = 0; i < r.size(); ++i) d += (i ? " L" : "M") + xy(r[i]);
  d += " Z ";
}

std::string line_el(const Segment& s) {
  return "<line x1=\"" + num(s.a.x) + "\" y1=\"" + num(-s.a.y) + "\" x2=\"" + num(s.b.x) +
         "\" y2=\"" + num(-s.b.y) + "\"/>\n";
}

}  // namespace

std::string render_svg(const FreeSpaceMap& map, const SvgLayers& layers) {
  const BBox& b = map.bbox();
  const double w = b.max_x - b.min_x, h = b.max_y - b.min_y;
  const double px = 0.05 * w, py = 0.05 * h;
  const double stroke = 0.002 * b.diagonal();
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(b.min_x - px) +
                    " " + num(-(b.max_y + py)) + " " + num(w + 2 * px) + " " + num(h + 2 * py) +
                    "\">\n";

  std::string d;
  for (std::size_t r = 0; r < map.ring_count(); ++r) ring_path(d, map.ring(r));
  out += "<g id=\"map\" fill=\"#eeeeee\" stroke=\"#333333\" stroke-width=\"" + num(stroke) +
         "\" fill-rule=\"evenodd\">\n<path d=\"" + d + "\"/>\n</g>\n";

  if (layers.medial) {
    out += "<g id=\"medial\" stroke=\"#3a7bd5\" stroke-width=\"" + num(stroke) + "\">\n";
    for (const auto& [u, v] : layers.medial->edges) {
      out += line_el(Segment(layers.medial->vertices[u].pos, layers.medial->vertices[v].pos));
    }
    out += "</g>\n";
  }
  if (layers.buckets) {
    out += "<g id=\"buckets\" fill=\"#f4a261\" fill-opacity=\"0.25\" stroke=\"#e76f51\" "
           "stroke-width=\"" + num(stroke) + "\" fill-rule=\"evenodd\">\n";
    for (const Bucket& bk : *layers.buckets) {
      std::string bd;
      for (const Polygon& p : bk.region) {
        ring_path(bd, p.outer);
        for (const Ring& hole : p.holes) ring_path(bd, hole);
      }
      out += "<path d=\"" + bd + "\"/>\n";
    }
    out += "</g>\n";
  }
  if (layers.rays) {
    out += "<g id=\"rays\" stroke=\"#999999\" stroke-width=\"" + num(stroke * 0.5) + "\">\n";
    for (const Ray& r : *layers.rays) out += line_el(r.seg);
    out += "</g>\n";
  }
  if (layers.axial) {
    out += "<g id=\"axial\" stroke=\"#c1121f\" stroke-width=\"" + num(stroke * 2) + "\">\n";
    for (const Ray& r : *layers.axial) out += line_el(r.seg);
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace axialgen
