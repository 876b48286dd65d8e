#include "axialgen/medial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <boost/polygon/voronoi.hpp>

namespace axialgen {

namespace {

struct IntPoint {
  std::int32_t x;
  std::int32_t y;
};

}  // namespace
}  // namespace axialgen

namespace boost::polygon {

template <>
struct geometry_concept<axialgen::IntPoint> {
  using type = point_concept;
};

template <>
struct point_traits<axialgen::IntPoint> {
  using coordinate_type = std::int32_t;
  static coordinate_type get(const axialgen::IntPoint& p, orientation_2d o) {
    return o == HORIZONTAL ? p.x : p.y;
  }
};

}  // namespace boost::polygon

namespace axialgen {

double MedialAxisGraph::total_length() const {
  double total = 0.0;
  for (const auto& [u, v] : edges) total += distance(vertices[u].pos, vertices[v].pos);
  return total;
}

std::vector<std::vector<int>> MedialAxisGraph::adjacency() const {
  std::vector<std::vector<int>> adj(vertices.size());
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

namespace {

double ring_distance(const Ring& a, const Ring& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      best = std::min(best, segment_segment_distance(a[i], a[(i + 1) % a.size()], b[j],
                                                     b[(j + 1) % b.size()]));
    }
  }
  return best;
}

double ring_self_width(const Ring& r) {
  const std::size_t n = r.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      best = std::min(best,
                      segment_segment_distance(r[i], r[(i + 1) % n], r[j], r[(j + 1) % n]));
    }
  }
  return best;
}

int arc_separation(const BoundarySample& a, const BoundarySample& b, int ring_samples) {
  const int d = std::abs(a.arc_index - b.arc_index);
  return std::min(d, ring_samples - d);
}

MedialVertex make_vertex(Point2 pos, std::vector<BoundarySample> assoc) {
  MedialVertex v;
  v.pos = pos;
  double sum = 0.0;
  for (const BoundarySample& s : assoc) sum += distance(pos, s.pos);
  v.clearance = assoc.empty() ? 0.0 : sum / static_cast<double>(assoc.size());
  v.associated = std::move(assoc);
  return v;
}

}  // namespace

double auto_cell_size(const FreeSpaceMap& map) {
  const auto holes = map.holes();
  if (holes.empty()) return ring_self_width(map.outer()) / 3.0;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < holes.size(); ++i) {
    gap = std::min(gap, ring_distance(holes[i], map.outer()));
    for (std::size_t j = i + 1; j < holes.size(); ++j) {
      gap = std::min(gap, ring_distance(holes[i], holes[j]));
    }
  }
  return gap / 3.0;
}

std::vector<BoundarySample> densify_boundary(const FreeSpaceMap& map, double cell_size) {
  if (!(cell_size > 0)) {
    throw Error(ErrorCode::NonPositiveCellSize, "cell size must be positive");
  }
  std::vector<BoundarySample> samples;
  for (std::size_t r = 0; r < map.ring_count(); ++r) {
    const Ring& ring = map.ring(r);
    int arc = 0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point2 a = ring[i], b = ring[(i + 1) % ring.size()];
      const int pieces = std::max(1, static_cast<int>(std::ceil(distance(a, b) / cell_size - 1e-9)));
      for (int k = 0; k < pieces; ++k) {
        samples.push_back({lerp(a, b, static_cast<double>(k) / pieces), static_cast<int>(r), arc++});
      }
    }
  }
  return samples;
}

MedialAxisGraph build_medial_axes(const FreeSpaceMap& map,
                                  const std::vector<BoundarySample>& samples,
                                  double cell_size) {
  if (!(cell_size > 0)) {
    throw Error(ErrorCode::NonPositiveCellSize, "cell size must be positive");
  }
  if (samples.size() < 4) {
    throw Error(ErrorCode::InsufficientSamples, "need at least 4 boundary samples");
  }

  std::map<int, int> ring_sizes;
  for (const BoundarySample& s : samples) ring_sizes[s.feature_id]++;

  // Boost.Polygon's Voronoi builder takes 32-bit integer sites; normalize the
  // bounding box so the quantization is relative to the map's extent.
  const BBox& box = map.bbox();
  const double scale = std::ldexp(1.0, 30) / box.diagonal();
  std::vector<IntPoint> sites;
  std::vector<int> site_sample;
  {
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const IntPoint ip{static_cast<std::int32_t>(std::llround((samples[i].pos.x - box.min_x) * scale)),
                        static_cast<std::int32_t>(std::llround((samples[i].pos.y - box.min_y) * scale))};
      if (!seen.insert({ip.x, ip.y}).second) continue;
      sites.push_back(ip);
      site_sample.push_back(static_cast<int>(i));
    }
  }
  boost::polygon::voronoi_diagram<double> vd;
  boost::polygon::construct_voronoi(sites.begin(), sites.end(), &vd);

  using VVertex = boost::polygon::voronoi_diagram<double>::vertex_type;
  auto to_map = [&](const VVertex& v) {
    return Point2(v.x() / scale + box.min_x, v.y() / scale + box.min_y);
  };
  auto sample_of_cell = [&](const auto* cell) {
    return site_sample[cell->source_index()];
  };

  MedialAxisGraph graph;
  graph.cell_size = cell_size;
  graph.samples = samples;
  // Near-cocircular samples make the builder emit clusters of almost
  // coincident vertices joined by zero-length edges; merge each cluster.
  const auto& vverts = vd.vertices();
  std::vector<std::size_t> parent(vverts.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto index_of = [&](const VVertex* v) { return static_cast<std::size_t>(v - vverts.data()); };
  const double merge_tol = 1e-7 * box.diagonal();
  for (const auto& edge : vd.edges()) {
    if (!edge.is_finite()) continue;
    if (distance(to_map(*edge.vertex0()), to_map(*edge.vertex1())) > merge_tol) continue;
    const std::size_t a = find(index_of(edge.vertex0())), b = find(index_of(edge.vertex1()));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<int>> cluster_sites(vverts.size());
  for (std::size_t i = 0; i < vverts.size(); ++i) {
    const auto* e = vverts[i].incident_edge();
    do {
      cluster_sites[find(i)].push_back(sample_of_cell(e->cell()));
      e = e->rot_next();
    } while (e != vverts[i].incident_edge());
  }

  std::map<std::size_t, int> vertex_ids;
  auto vertex_id = [&](const VVertex* v) {
    const std::size_t root = find(index_of(v));
    auto it = vertex_ids.find(root);
    if (it != vertex_ids.end()) return it->second;
    std::vector<BoundarySample> assoc;
    std::set<int> seen;
    for (int s : cluster_sites[root]) {
      if (seen.insert(s).second) assoc.push_back(samples[s]);
    }
    MedialVertex mv = make_vertex(to_map(vverts[root]), std::move(assoc));
    mv.id = static_cast<int>(graph.vertices.size());
    graph.vertices.push_back(std::move(mv));
    vertex_ids.emplace(root, graph.vertices.back().id);
    return graph.vertices.back().id;
  };

  std::set<std::pair<int, int>> seen_edges;
  for (const auto& edge : vd.edges()) {
    if (!edge.is_primary() || !edge.is_finite()) continue;
    // Each undirected edge appears twice; keep the half with the lower address.
    if (&edge > edge.twin()) continue;
    const BoundarySample& s1 = samples[sample_of_cell(edge.cell())];
    const BoundarySample& s2 = samples[sample_of_cell(edge.twin()->cell())];
    if (s1.feature_id == s2.feature_id &&
        arc_separation(s1, s2, ring_sizes[s1.feature_id]) <= kMinArcSeparation) {
      continue;
    }
    if (find(index_of(edge.vertex0())) == find(index_of(edge.vertex1()))) continue;
    const Point2 a = to_map(*edge.vertex0()), b = to_map(*edge.vertex1());
    if (!segment_in_free_space(map, a, b)) continue;
    const int u = vertex_id(edge.vertex0());
    const int v = vertex_id(edge.vertex1());
    if (seen_edges.insert({std::min(u, v), std::max(u, v)}).second) graph.edges.emplace_back(u, v);
  }

  // Medial branches run into every corner that is convex as seen from the
  // free space. The Voronoi vertex shared by the corner sample and its two
  // neighbours is where the branch leaves the sampled skeleton; close the
  // branch with an edge to the corner itself.
  std::vector<int> first_of_ring(map.ring_count(), -1);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (first_of_ring[samples[i].feature_id] < 0) first_of_ring[samples[i].feature_id] = static_cast<int>(i);
  }
  const std::size_t kept = graph.vertices.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const BoundarySample& s = samples[i];
    const Ring& ring = map.ring(s.feature_id);
    const auto corner = std::find(ring.begin(), ring.end(), s.pos);
    if (corner == ring.end()) continue;
    const std::size_t k = static_cast<std::size_t>(corner - ring.begin());
    const Point2 prev = ring[(k + ring.size() - 1) % ring.size()];
    const Point2 next = ring[(k + 1) % ring.size()];
    if (cross(s.pos - prev, next - s.pos) <= 0) continue;

    const int n = ring_sizes[s.feature_id];
    const int base = first_of_ring[s.feature_id];
    const BoundarySample& sp = samples[base + (s.arc_index + n - 1) % n];
    const BoundarySample& sn = samples[base + (s.arc_index + 1) % n];
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < kept; ++v) {
      const auto& assoc = graph.vertices[v].associated;
      auto has = [&](const BoundarySample& q) {
        return std::any_of(assoc.begin(), assoc.end(), [&](const BoundarySample& a) {
          return a.feature_id == q.feature_id && a.arc_index == q.arc_index;
        });
      };
      if (!has(s) || !has(sp) || !has(sn)) continue;
      const double d = distance(graph.vertices[v].pos, s.pos);
      if (d < best_d) best_d = d, best = static_cast<int>(v);
    }
    if (best < 0) continue;
    MedialVertex mv = make_vertex(s.pos, {sp, sn});
    mv.id = static_cast<int>(graph.vertices.size());
    graph.vertices.push_back(std::move(mv));
    graph.edges.emplace_back(best, graph.vertices.back().id);
  }
  return graph;
}

namespace {

// Nearest wall point plus the nearest wall point on the opposite side.
std::vector<BoundarySample> project_to_boundary(const FreeSpaceMap& map,
                                                const std::vector<BoundarySample>& samples,
                                                Point2 p) {
  struct Hit {
    double d;
    Point2 q;
    int ring;
  };
  std::vector<Hit> hits;
  for (const BoundaryEdge& e : map.edges()) {
    const Point2 q = closest_point_on_segment(p, e.a, e.b);
    hits.push_back({distance(p, q), q, e.ring});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.d < b.d; });
  std::vector<Hit> chosen{hits.front()};
  const Point2 dir0 = hits.front().q - p;
  for (std::size_t i = 1; i < hits.size(); ++i) {
    if (dot(hits[i].q - p, dir0) < 0) {
      chosen.push_back(hits[i]);
      break;
    }
  }
  if (chosen.size() < 2) {
    for (std::size_t i = 1; i < hits.size(); ++i) {
      if (distance(hits[i].q, chosen.front().q) > map.epsilon()) {
        chosen.push_back(hits[i]);
        break;
      }
    }
  }
  std::vector<BoundarySample> out;
  for (const Hit& h : chosen) {
    // Arc index of the nearest sample on the same ring.
    int arc = 0;
    double best = std::numeric_limits<double>::infinity();
    for (const BoundarySample& s : samples) {
      if (s.feature_id != h.ring) continue;
      const double d = distance(s.pos, h.q);
      if (d < best) best = d, arc = s.arc_index;
    }
    out.push_back({h.q, h.ring, arc});
  }
  return out;
}

double spacing_threshold(const MedialAxisGraph& g) {
  double sum = 0.0;
  for (const MedialVertex& v : g.vertices) sum += 2.0 * v.clearance;
  return 4.0 * sum / static_cast<double>(g.vertices.size());
}

}  // namespace

MedialAxisGraph densify_medial_vertices(const MedialAxisGraph& graph, const FreeSpaceMap& map) {
  MedialAxisGraph g = graph;
  if (g.edges.empty() || g.vertices.empty()) return g;
  // Inserting vertices shifts the average width, so repeat until stable.
  for (int round = 0; round < 32; ++round) {
    const double threshold = spacing_threshold(g);
    if (!(threshold > 0)) return g;
    bool changed = false;
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : g.edges) {
      const Point2 a = g.vertices[u].pos, b = g.vertices[v].pos;
      const double len = distance(a, b);
      if (len <= threshold) {
        edges.emplace_back(u, v);
        continue;
      }
      changed = true;
      const int pieces = static_cast<int>(std::ceil(len / threshold));
      int prev = u;
      for (int k = 1; k < pieces; ++k) {
        const Point2 p = lerp(a, b, static_cast<double>(k) / pieces);
        MedialVertex mv = make_vertex(p, project_to_boundary(map, g.samples, p));
        mv.id = static_cast<int>(g.vertices.size());
        g.vertices.push_back(std::move(mv));
        edges.emplace_back(prev, g.vertices.back().id);
        prev = g.vertices.back().id;
      }
      edges.emplace_back(prev, v);
    }
    g.edges.swap(edges);
    if (!changed) break;
  }
  return g;
}

MedialAxisGraph medial_axes(const FreeSpaceMap& map, double cell_size) {
  const auto samples = densify_boundary(map, cell_size);
  return densify_medial_vertices(build_medial_axes(map, samples, cell_size), map);
}

}  // namespace axialgen
