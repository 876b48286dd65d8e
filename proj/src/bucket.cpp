#include "axialgen/bucket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>

namespace axialgen {

namespace {

// Frame of the ray: t along it from seg.a, s signed distance (left > 0).
struct Frame {
  Point2 a;
  Point2 u;
  double length;
  double tol;

  explicit Frame(const Ray& ray)
      : a(ray.seg.a), u(ray.seg.direction()), length(ray.seg.length()),
        tol(1e-9 * std::max(1.0, ray.seg.length())) {}

  double t(Point2 p) const { return dot(p - a, u); }
  double s(Point2 p) const { return cross(u, p - a); }
  int side(Point2 p) const {
    const double v = s(p);
    return v > tol ? 1 : (v < -tol ? -1 : 0);
  }
};

struct Crossing {
  double t;
  Point2 pos;
  std::vector<int> left;   // graph vertices next to the crossing, strictly left
  std::vector<int> right;  // strictly right
};

std::vector<Crossing> find_crossings(const Frame& f, const MedialAxisGraph& g) {
  const std::size_t n = g.vertices.size();
  std::vector<int> side(n);
  for (std::size_t i = 0; i < n; ++i) side[i] = f.side(g.vertices[i].pos);
  const auto adj = g.adjacency();
  auto in_span = [&](double t) { return t >= -f.tol && t <= f.length + f.tol; };

  std::vector<Crossing> out;
  for (const auto& [i, j] : g.edges) {
    if (side[i] * side[j] >= 0) continue;
    const Point2 p = g.vertices[i].pos, q = g.vertices[j].pos;
    const double si = f.s(p), sj = f.s(q);
    const Point2 x = lerp(p, q, si / (si - sj));
    if (!in_span(f.t(x))) continue;
    Crossing c{f.t(x), x, {}, {}};
    (side[i] > 0 ? c.left : c.right).push_back(i);
    (side[j] > 0 ? c.left : c.right).push_back(j);
    out.push_back(std::move(c));
  }

  // Vertices on the ray line: each connected run of them is one crossing at
  // the middle of its extent.
  std::vector<int> comp(n, -1);
  for (std::size_t s0 = 0; s0 < n; ++s0) {
    if (side[s0] != 0 || comp[s0] >= 0) continue;
    std::vector<int> members;
    std::queue<int> q;
    q.push(static_cast<int>(s0));
    comp[s0] = static_cast<int>(s0);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      members.push_back(v);
      for (int w : adj[v]) {
        if (side[w] == 0 && comp[w] < 0) comp[w] = static_cast<int>(s0), q.push(w);
      }
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    Crossing c;
    for (int v : members) {
      lo = std::min(lo, f.t(g.vertices[v].pos));
      hi = std::max(hi, f.t(g.vertices[v].pos));
      for (int w : adj[v]) {
        if (side[w] > 0) c.left.push_back(w);
        if (side[w] < 0) c.right.push_back(w);
      }
    }
    lo = std::max(lo, 0.0);
    hi = std::min(hi, f.length);
    if (lo > hi + f.tol) continue;
    c.t = 0.5 * (lo + hi);
    c.pos = f.a + f.u * c.t;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) {
    if (x.t != y.t) return x.t < y.t;
    return std::tie(x.pos.x, x.pos.y) < std::tie(y.pos.x, y.pos.y);
  });
  return out;
}

struct Path {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> vertices;
};

// Shortest route through graph vertices strictly on one side of the ray
// between the anchors of two crossings.
Path side_path(const MedialAxisGraph& g, const std::vector<std::vector<int>>& adj,
               const Frame& f, int sign, const Crossing& from, const Crossing& to) {
  const auto& sources = sign > 0 ? from.left : from.right;
  const auto& targets = sign > 0 ? to.left : to.right;
  Path best;
  if (sources.empty() || targets.empty()) return best;
  const std::size_t n = g.vertices.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> prev(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int v : sources) {
    const double d = distance(from.pos, g.vertices[v].pos);
    if (d < dist[v]) dist[v] = d, prev[v] = -1, pq.push({d, v});
  }
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (int w : adj[v]) {
      if (f.side(g.vertices[w].pos) != sign) continue;
      const double nd = d + distance(g.vertices[v].pos, g.vertices[w].pos);
      if (nd < dist[w]) dist[w] = nd, prev[w] = v, pq.push({nd, w});
    }
  }
  int end = -1;
  for (int v : targets) {
    const double c = dist[v] + distance(g.vertices[v].pos, to.pos);
    if (c < best.cost) best.cost = c, end = v;
  }
  for (int v = end; v >= 0; v = prev[v]) best.vertices.push_back(v);
  std::reverse(best.vertices.begin(), best.vertices.end());
  return best;
}

std::pair<Point2, Point2> widest_pair(const MedialVertex& v) {
  std::pair<Point2, Point2> best{v.associated.front().pos, v.associated.back().pos};
  double d = -1.0;
  for (std::size_t i = 0; i < v.associated.size(); ++i) {
    for (std::size_t j = i + 1; j < v.associated.size(); ++j) {
      const double dij = distance(v.associated[i].pos, v.associated[j].pos);
      if (dij > d) d = dij, best = {v.associated[i].pos, v.associated[j].pos};
    }
  }
  return best;
}

// Nearest samples on each side of a ray endpoint within two cells; a missing
// side repeats the other (an endpoint in a corner).
std::pair<Point2, Point2> endpoint_pair(const Frame& f, const MedialAxisGraph& g, Point2 e) {
  std::optional<Point2> left, right;
  double dl = 2 * g.cell_size, dr = 2 * g.cell_size;
  for (const BoundarySample& s : g.samples) {
    const double d = distance(s.pos, e);
    const int side = f.side(s.pos);
    if (side > 0 && d <= dl) dl = d, left = s.pos;
    if (side < 0 && d <= dr) dr = d, right = s.pos;
  }
  if (!left && !right) return {e, e};
  if (!left) left = right;
  if (!right) right = left;
  return {*left, *right};
}

}  // namespace

BucketTrace trace_crossings(const Ray& ray, const MedialAxisGraph& graph) {
  const Frame f(ray);
  BucketTrace trace;
  trace.ray_id = ray.id;
  const auto crossings = find_crossings(f, graph);
  const auto adj = graph.adjacency();
  for (const Crossing& c : crossings) trace.crossings.push_back(c.pos);

  for (std::size_t k = 0; k + 1 < crossings.size(); ++k) {
    const Path l = side_path(graph, adj, f, 1, crossings[k], crossings[k + 1]);
    const Path r = side_path(graph, adj, f, -1, crossings[k], crossings[k + 1]);
    const Path& p = l.cost <= r.cost ? l : r;
    if (p.vertices.empty()) continue;
    int branch = p.vertices.front();
    for (int v : p.vertices) {
      if (std::abs(f.s(graph.vertices[v].pos)) > std::abs(f.s(graph.vertices[branch].pos))) {
        branch = v;
      }
    }
    const MedialVertex& y = graph.vertices[branch];
    if (!trace.branch_points.empty() && trace.branch_points.back().id == y.id) continue;
    trace.branch_points.push_back(y);
    if (y.associated.size() >= 2) trace.branch_associates.push_back(widest_pair(y));
  }

  const auto [e11, e12] = endpoint_pair(f, graph, ray.seg.a);
  const auto [e21, e22] = endpoint_pair(f, graph, ray.seg.b);
  trace.endpoint_associates = {e11, e12, e21, e22};

  for (const MedialVertex& v : graph.vertices) {
    const double d = point_segment_distance(v.pos, ray.seg.a, ray.seg.b);
    if (d > v.clearance + f.tol) continue;
    for (const BoundarySample& s : v.associated) trace.flank_associates.push_back(s.pos);
  }
  return trace;
}

namespace {

struct Located {
  int ring = -1;
  int edge = 0;  // edge k runs from ring[k] to ring[k+1]
  double param = 0.0;
};

Located locate(const FreeSpaceMap& map, Point2 p) {
  Located best;
  double bd = 1e-7 * map.bbox().diagonal();
  for (const BoundaryEdge& e : map.edges()) {
    const double d = point_segment_distance(p, e.a, e.b);
    if (d <= bd) {
      bd = d;
      const double len2 = dot(e.b - e.a, e.b - e.a);
      best = {e.ring, e.index, std::clamp(dot(p - e.a, e.b - e.a) / len2, 0.0, 1.0)};
    }
  }
  return best;
}

// Ring vertices walked from p to q along their common ring, provided every
// one stays on the chain's side and advances monotonically along the ray.
std::vector<Point2> splice(const FreeSpaceMap& map, const Frame& f, Point2 p, Point2 q,
                           int sign, int dir) {
  const Located lp = locate(map, p), lq = locate(map, q);
  if (lp.ring < 0 || lp.ring != lq.ring) return {};
  const Ring& ring = map.ring(lp.ring);
  const int n = static_cast<int>(ring.size());

  std::optional<std::vector<Point2>> best;
  for (int step : {1, -1}) {
    std::vector<Point2> walk;
    if (lp.edge == lq.edge && (step > 0 ? lq.param >= lp.param : lq.param <= lp.param)) {
      best = walk;
      break;
    }
    int k = step > 0 ? (lp.edge + 1) % n : lp.edge;
    const int stop = step > 0 ? (lq.edge + 1) % n : lq.edge;
    bool ok = true;
    double last_t = f.t(p);
    for (int guard = 0; k != stop; ++guard) {
      if (guard > n) {
        ok = false;
        break;
      }
      const Point2 v = ring[k];
      const double t = f.t(v);
      if (f.side(v) == -sign || (t - last_t) * dir < -f.tol ||
          (f.t(q) - t) * dir < -f.tol) {
        ok = false;
        break;
      }
      walk.push_back(v);
      last_t = t;
      k = (k + step + n) % n;
    }
    if (ok && (!best || walk.size() < best->size())) best = walk;
  }
  return best ? *best : std::vector<Point2>{};
}

void push_distinct(Ring& ring, Point2 p, double tol) {
  if (ring.empty() || distance(ring.back(), p) > tol) ring.push_back(p);
}

Ring chain(const Ray& ray, const std::vector<Point2>& left, const std::vector<Point2>& right,
           const FreeSpaceMap* map, const Frame& f) {
  // Cyclic sequence: e1, left ascending, e2, right descending.
  struct Node {
    Point2 p;
    int sign;
    int dir;
  };
  std::vector<Node> seq;
  seq.push_back({ray.seg.a, 1, 1});
  for (const Point2& p : left) seq.push_back({p, 1, 1});
  seq.push_back({ray.seg.b, -1, -1});
  for (const Point2& p : right) seq.push_back({p, -1, -1});

  Ring ring;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const Node& cur = seq[i];
    const Node& nxt = seq[(i + 1) % seq.size()];
    push_distinct(ring, cur.p, f.tol);
    if (map) {
      for (const Point2& v : splice(*map, f, cur.p, nxt.p, cur.sign, cur.dir)) {
        push_distinct(ring, v, f.tol);
      }
    }
  }
  while (ring.size() > 1 && distance(ring.front(), ring.back()) <= f.tol) ring.pop_back();
  return ring;
}

}  // namespace

Bucket build_bucket(const Ray& ray, const BucketTrace& trace, const FreeSpaceMap& map) {
  const Frame f(ray);
  std::vector<Point2> points(trace.endpoint_associates.begin(), trace.endpoint_associates.end());
  for (const auto& [p, q] : trace.branch_associates) {
    points.push_back(p);
    points.push_back(q);
  }
  points.insert(points.end(), trace.flank_associates.begin(), trace.flank_associates.end());

  std::vector<Point2> left, right;
  for (const Point2& p : points) {
    const int side = f.side(p);
    if (side > 0) left.push_back(p);
    if (side < 0) right.push_back(p);
  }
  // Sort key: projection clamped to the ray, then distance from the line.
  // Points past an endpoint lie along its end wall; leaving e1 or arriving
  // at e2 they must run outward from the endpoint, not back over it.
  auto key = [&](Point2 p) {
    const double t = std::clamp(f.t(p), 0.0, f.length);
    const double s = std::abs(f.s(p));
    return std::pair{t, t >= f.length - f.tol ? -s : s};
  };
  auto order = [&](std::vector<Point2>& v, bool ascending) {
    std::sort(v.begin(), v.end(), [&](Point2 x, Point2 y) {
      const auto kx = key(x), ky = key(y);
      if (std::abs(kx.first - ky.first) > f.tol) {
        return ascending ? kx.first < ky.first : kx.first > ky.first;
      }
      if (kx.second != ky.second) return ascending ? kx.second < ky.second : kx.second > ky.second;
      return std::tie(x.x, x.y) < std::tie(y.x, y.y);
    });
    v.erase(std::unique(v.begin(), v.end(),
                        [&](Point2 x, Point2 y) { return distance(x, y) <= f.tol; }),
            v.end());
  };
  order(left, true);
  order(right, false);

  if (left.size() + right.size() < 1) {
    throw Error(ErrorCode::DegenerateBucket, "fewer than 3 distinct bucket points");
  }
  Ring ring = chain(ray, left, right, &map, f);
  if (!ring_is_valid(ring)) ring = chain(ray, left, right, nullptr, f);
  if (!ring_is_valid(ring)) {
    std::vector<Point2> all = left;
    all.insert(all.end(), right.begin(), right.end());
    all.push_back(ray.seg.a);
    all.push_back(ray.seg.b);
    ring = convex_hull(all);
  }

  Bucket b;
  b.owner_ray_id = ray.id;
  for (Polygon& part : clip_to_free_space(ring, map)) {
    if (length_inside(ray.seg, std::span<const Polygon>(&part, 1)) > 0.0) {
      b.region.push_back(std::move(part));
    }
  }
  std::size_t largest = 0;
  for (std::size_t i = 0; i < b.region.size(); ++i) {
    b.area += polygon_area(b.region[i]);
    if (polygon_area(b.region[i]) > polygon_area(b.region[largest])) largest = i;
  }
  if (!b.region.empty()) b.boundary = b.region[largest].outer;
  return b;
}

Bucket bucket_of(const Ray& ray, const MedialAxisGraph& graph, const FreeSpaceMap& map) {
  return build_bucket(ray, trace_crossings(ray, graph), map);
}

double ray_bucket_overlap(const Ray& candidate, const Bucket& b) {
  const double len = candidate.seg.length();
  if (!(len > 0)) return 0.0;
  return std::clamp(length_inside(candidate.seg, b.region) / len, 0.0, 1.0);
}

}  // namespace axialgen
