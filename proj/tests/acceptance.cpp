// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--strict]
//
// Exit status is nonzero when a criterion fails that is not listed in
// kKnownFailures, or when a listed one starts passing. --strict fails on any
// FAIL.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "axialgen/pipeline.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

using namespace axialgen;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kKnownFailures = {"degenerate_scenes", "cross_strategy"};

constexpr double kThreshold = 0.85;
constexpr int kSamples = 2000;
constexpr double kSampleTol = 4.0 / kSamples;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      else detail.str("");
      pass = false;
      detail << what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

struct Prepared {
  FreeSpaceMap map;
  MedialAxisGraph graph;
  std::vector<Ray> rays;
};

Prepared prepare(const FreeSpaceMap& m) {
  Prepared p{m, medial_axes(m, auto_cell_size(m)), {}};
  p.rays = rays_from_medial(p.map, p.graph);
  return p;
}

ReduceConfig with(Strategy s) {
  ReduceConfig c;
  c.strategy = s;
  return c;
}

AxialMap reduce(const Prepared& p, Strategy s) {
  return s == Strategy::Global ? reduce_global(p.rays, p.graph, p.map, with(s))
                               : reduce_search(p.rays, p.graph, p.map, with(s));
}

double sampled(const Ray& r, const Bucket& b) {
  return oracle::sampled_overlap(r.seg.a, r.seg.b, b.region, kSamples);
}

// Rays not >= threshold inside any selected bucket.
std::size_t unabsorbed(const std::vector<Ray>& rays, const AxialMap& ax) {
  std::size_t n = 0;
  for (const Ray& r : rays) {
    bool ok = false;
    for (const Bucket& b : ax.buckets) {
      if (sampled(r, b) >= kThreshold - kSampleTol) {
        ok = true;
        break;
      }
    }
    n += !ok;
  }
  return n;
}

// Ordered pairs (i, j) with line i >= threshold inside bucket j.
std::size_t redundant_pairs(const AxialMap& ax) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < ax.lines.size(); ++i) {
    for (std::size_t j = 0; j < ax.lines.size(); ++j) {
      if (i != j && sampled(ax.lines[i], ax.buckets[j]) >= kThreshold + kSampleTol) ++n;
    }
  }
  return n;
}

bool same_line_set(const AxialMap& a, const AxialMap& b) {
  if (a.lines.size() != b.lines.size()) return false;
  std::vector<char> used(b.lines.size(), 0);
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < b.lines.size() && !found; ++j) {
      if (!used[j] && sampled(a.lines[i], b.buckets[j]) >= kThreshold - kSampleTol &&
          sampled(b.lines[j], a.buckets[i]) >= kThreshold - kSampleTol) {
        used[j] = 1;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

Point2 free_point(const FreeSpaceMap& m, std::mt19937_64& rng, double margin) {
  const BBox& b = m.bbox();
  std::uniform_real_distribution<double> ux(b.min_x, b.max_x), uy(b.min_y, b.max_y);
  for (;;) {
    const Point2 p{ux(rng), uy(rng)};
    if (oracle::inside(m, p, 0.0) && oracle::wall_distance(m, p) > margin) return p;
  }
}

Point2 nearest_on_segment(const Segment& s, Point2 p) {
  const Point2 d = s.b - s.a;
  const double t = std::clamp(((p.x - s.a.x) * d.x + (p.y - s.a.y) * d.y) / (d.x * d.x + d.y * d.y), 0.0, 1.0);
  return {s.a.x + t * d.x, s.a.y + t * d.y};
}

bool sees(const FreeSpaceMap& m, Point2 p, Point2 q) {
  const double len = std::hypot(q.x - p.x, q.y - p.y);
  const double tol = 1e-9 * m.bbox().diagonal();
  if (len <= tol) return true;
  const Point2 d{(q.x - p.x) / len, (q.y - p.y) / len};
  return oracle::reach(m, p, d) >= len - tol;
}

FreeSpaceMap scaled_map(const FreeSpaceMap& m, double s) {
  std::vector<Ring> holes;
  for (const Ring& h : m.holes()) holes.push_back(scenes::scaled(h, s));
  return build_free_space(scenes::scaled(m.outer(), s), holes);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

void isovist_oracle(Verdict& v) {
  const auto t0 = Clock::now();
  const std::vector<scenes::Named> scenes = {{"square", scenes::square()},
                                             {"l_shape", scenes::l_shape()},
                                             {"corridor", scenes::corridor()},
                                             {"four_blocks", scenes::four_blocks()},
                                             {"grid", scenes::grid()}};
  std::mt19937_64 rng(101);
  double worst = 0.0;
  int n = 0;
  for (const auto& [name, m] : scenes) {
    for (int k = 0; k < 20; ++k, ++n) {
      const Point2 p = free_point(m, rng, 1e-3);
      const double exact = compute_isovist(m, p).area;
      const double ref = oracle::sampled_isovist_area(m, p, 36000);
      const double err = std::abs(exact - ref) / ref;
      worst = std::max(worst, err);
      v.require(err <= 0.01, std::string(name) + " at (" + fmt(p.x) + ", " + fmt(p.y) +
                                 ") rel err " + fmt(err));
    }
  }
  const double secs = seconds_since(t0);
  v.require(secs < 30.0, "took " + fmt(secs) + " s");
  if (v.pass) v.detail << n << " viewpoints, max rel err " << fmt(worst, 3) << ", " << fmt(secs, 3) << " s";
}

void medial_fidelity(Verdict& v) {
  double worst = 0.0;
  std::size_t vertices = 0;
  for (const auto& [name, m] : scenes::all()) {
    const MedialAxisGraph g = medial_axes(m, auto_cell_size(m));
    for (const MedialVertex& mv : g.vertices) {
      double lo = 1e300, hi = 0.0;
      for (const BoundarySample& s : mv.associated) {
        const double d = std::hypot(s.pos.x - mv.pos.x, s.pos.y - mv.pos.y);
        lo = std::min(lo, d), hi = std::max(hi, d);
      }
      ++vertices;
      worst = std::max(worst, (hi - lo) / g.cell_size);
      v.require(mv.associated.size() >= 2 && hi - lo <= 2 * g.cell_size,
                std::string(name) + " vertex " + std::to_string(mv.id) + " spread " + fmt(hi - lo));
    }
  }
  const FreeSpaceMap r = scenes::rectangle();
  const double c = auto_cell_size(r);
  const double l1 = build_medial_axes(r, densify_boundary(r, c), c).total_length();
  const double l2 = build_medial_axes(r, densify_boundary(r, c / 2), c / 2).total_length();
  const double change = std::abs(l2 - l1) / l1;
  v.require(change <= 0.05, "halving cell changes rectangle skeleton by " + fmt(change));
  if (v.pass) {
    v.detail << vertices << " vertices, max spread " << fmt(worst, 3)
             << " cells; rectangle skeleton change " << fmt(100 * change, 3) << "%";
  }
}

void bucket_containment(Verdict& v) {
  std::mt19937_64 rng(202);
  std::size_t rays = 0, points = 0;
  double worst = 1.0;
  for (const auto& [name, m] : scenes::all()) {
    const Prepared p = prepare(m);
    for (const Ray& r : p.rays) {
      ++rays;
      const Bucket b = bucket_of(r, p.graph, p.map);
      const double own = ray_bucket_overlap(r, b);
      const double ref = sampled(r, b);
      worst = std::min({worst, own, ref + kSampleTol});
      v.require(own >= 0.99 && ref >= 0.99 - kSampleTol,
                std::string(name) + " ray " + std::to_string(r.id) + " own overlap " + fmt(own) +
                    " (sampled " + fmt(ref) + ")");

      double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
      for (const Polygon& part : b.region) {
        for (const Point2& q : part.outer) {
          x0 = std::min(x0, q.x), y0 = std::min(y0, q.y);
          x1 = std::max(x1, q.x), y1 = std::max(y1, q.y);
        }
      }
      std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
      int checked = 0;
      for (int tries = 0; checked < 50 && tries < 200000; ++tries) {
        const Point2 q{ux(rng), uy(rng)};
        if (!oracle::in_region(b.region, q)) continue;
        ++checked;
        v.require(sees(m, q, nearest_on_segment(r.seg, q)),
                  std::string(name) + " ray " + std::to_string(r.id) + " bucket point (" + fmt(q.x) +
                      ", " + fmt(q.y) + ") cannot see the ray");
      }
      points += checked;
      v.require(checked == 50, std::string(name) + " ray " + std::to_string(r.id) + " bucket too thin to sample");
    }
  }
  if (v.pass) {
    v.detail << rays << " rays, min own overlap " << fmt(worst, 4) << ", " << points
             << " visibility samples";
  }
}

void grid_line_count(Verdict& v) {
  const auto t0 = Clock::now();
  const Prepared p = prepare(scenes::grid());
  const AxialMap g = reduce(p, Strategy::Global);
  const double secs = seconds_since(t0);
  v.require(g.lines.size() == 8, "global selects " + std::to_string(g.lines.size()) + " lines");

  // one line per street: 4 horizontal, 4 vertical, midpoints in distinct streets
  std::set<int> rows, cols;
  for (const Ray& l : g.lines) {
    const Point2 m{(l.seg.a.x + l.seg.b.x) / 2, (l.seg.a.y + l.seg.b.y) / 2};
    const bool horizontal = std::abs(l.seg.b.x - l.seg.a.x) > std::abs(l.seg.b.y - l.seg.a.y);
    const double c = horizontal ? m.y : m.x;
    const int street = static_cast<int>(std::lround((c - 5.0) / 30.0));
    v.require(std::abs(c - (5.0 + 30.0 * street)) <= 5.0, "line off street at " + fmt(c));
    (horizontal ? rows : cols).insert(street);
  }
  v.require(rows.size() == 4 && cols.size() == 4, "streets covered: " + std::to_string(rows.size()) +
                                                      " rows, " + std::to_string(cols.size()) + " columns");
  const std::size_t missed = unabsorbed(p.rays, g);
  v.require(missed == 0, std::to_string(missed) + " rays unabsorbed");

  const AxialMap b = reduce(p, Strategy::Bfs);
  v.require(same_line_set(g, b), "bfs selects a different set (" + std::to_string(b.lines.size()) + " lines)");
  v.require(secs < 60.0, "took " + fmt(secs) + " s");
  if (v.pass) {
    v.detail << "8 lines (4 rows, 4 columns), " << p.rays.size() << " rays absorbed, bfs same set, "
             << fmt(secs, 3) << " s";
  }
}

void degenerate_scenes(Verdict& v) {
  struct Case {
    const char* name;
    FreeSpaceMap map;
    std::size_t want;
  };
  const std::vector<Case> cases = {
      {"rectangle", scenes::rectangle(), 1}, {"cross", scenes::cross(), 2}, {"t_shape", scenes::t_shape(), 2}};
  std::ostringstream counts;
  for (const Case& c : cases) {
    const Prepared p = prepare(c.map);
    const AxialMap g = reduce(p, Strategy::Global);
    counts << (counts.tellp() > 0 ? " " : "") << c.name << "=" << g.lines.size();
    v.require(g.lines.size() == c.want, std::string(c.name) + ": " + std::to_string(g.lines.size()) +
                                            " lines, want " + std::to_string(c.want));
    const std::size_t missed = unabsorbed(p.rays, g);
    v.require(missed == 0, std::string(c.name) + ": " + std::to_string(missed) + " rays unabsorbed");
    v.require(redundant_pairs(g) == 0, std::string(c.name) + ": redundant lines");
  }
  if (v.pass) v.detail << counts.str();
  else v.detail << " [" << counts.str() << "]";
}

void reduction_invariants(Verdict& v) {
  std::size_t maps = 0, rays = 0;
  for (const auto& [name, m] : scenes::all()) {
    const Prepared p = prepare(m);
    for (Strategy s : {Strategy::Global, Strategy::Bfs, Strategy::Dfs}) {
      const AxialMap ax = reduce(p, s);
      ++maps;
      rays += p.rays.size();
      const std::string tag = std::string(name) + "/" + to_string(s);
      const std::size_t missed = unabsorbed(p.rays, ax);
      v.require(missed == 0, tag + ": " + std::to_string(missed) + " rays unabsorbed");
      const std::size_t pairs = redundant_pairs(ax);
      v.require(pairs == 0, tag + ": " + std::to_string(pairs) + " redundant pairs");
    }
  }
  if (v.pass) v.detail << maps << " axial maps, " << rays << " ray absorption checks";
}

void cross_strategy(Verdict& v) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::ostringstream counts;
  for (const scenes::Named& sc : {scenes::Named{"rectangle", scenes::rectangle()},
                                  scenes::Named{"grid", scenes::grid()}}) {
    const Prepared p = prepare(sc.map);
    const AxialMap g = reduce(p, Strategy::Global);
    counts << (counts.tellp() > 0 ? "; " : "") << sc.name << " global=" << g.lines.size() << " seeded=";
    for (int k = 0; k < 5; ++k) {
      Segment seed;
      for (;;) {
        const Point2 a = free_point(p.map, rng, 0.1);
        const double t = angle(rng);
        const Point2 b{a.x + std::cos(t), a.y + std::sin(t)};
        if (oracle::inside(p.map, b, 0.0) && sees(p.map, a, b)) {
          seed = Segment(a, b);
          break;
        }
      }
      const AxialMap l = axialgen_line_seeded(p.map, seed, p.graph, {}, with(Strategy::LineSeeded));
      counts << (k ? "," : "") << l.lines.size();
      v.require(same_line_set(g, l), std::string(sc.name) + " seed (" + fmt(seed.a.x) + ", " +
                                         fmt(seed.a.y) + ") gives " + std::to_string(l.lines.size()) +
                                         " lines, global " + std::to_string(g.lines.size()));
    }
  }
  if (v.pass) v.detail << counts.str();
  else v.detail << " [" << counts.str() << "]";
}

void determinism_scale(Verdict& v, const std::string& data) {
  const fs::path root = fs::temp_directory_path() / "axialgen_acceptance";
  fs::remove_all(root);
  const char* files[] = {"axial.geojson", "buckets.geojson", "medial.geojson", "map.svg", "stats.json"};
  std::size_t compared = 0;
  for (const auto& [input, strategy] : {std::pair{"grid.geojson", Strategy::Global},
                                        std::pair{"four_blocks.geojson", Strategy::Bfs}}) {
    std::vector<fs::path> runs;
    int k = 0;
    for (const char* workers : {"1", "4", "1"}) {
      setenv("AXIALGEN_THREADS", workers, 1);
      PipelineConfig cfg;
      cfg.input_path = data + "/" + input;
      cfg.reduce.strategy = strategy;
      cfg.outputs = {Output::Axial, Output::Medial, Output::Svg, Output::Stats};
      cfg.out_dir = (root / (std::string(input) + "." + std::to_string(k++))).string();
      run_pipeline(cfg);
      runs.push_back(cfg.out_dir);
    }
    unsetenv("AXIALGEN_THREADS");
    for (const char* f : files) {
      const std::string first = slurp(runs[0] / f);
      v.require(!first.empty(), std::string(input) + ": " + f + " missing");
      for (std::size_t r = 1; r < runs.size(); ++r) {
        ++compared;
        v.require(slurp(runs[r] / f) == first, std::string(input) + ": " + f + " differs between runs");
      }
    }
  }

  double worst = 0.0;
  for (const scenes::Named& sc : {scenes::Named{"grid", scenes::grid()},
                                  scenes::Named{"four_blocks", scenes::four_blocks()}}) {
    const Prepared a = prepare(sc.map);
    const Prepared b = prepare(scaled_map(sc.map, 1000.0));
    for (Strategy s : {Strategy::Global, Strategy::Bfs}) {
      const AxialMap la = reduce(a, s), lb = reduce(b, s);
      const std::string tag = std::string(sc.name) + "/" + to_string(s);
      if (la.lines.size() != lb.lines.size()) {
        v.require(false, tag + ": " + std::to_string(la.lines.size()) + " vs " +
                             std::to_string(lb.lines.size()) + " lines after scaling");
        continue;
      }
      const double tol = 1e-9 * b.map.bbox().diagonal();
      for (std::size_t i = 0; i < la.lines.size(); ++i) {
        const double d = std::max(distance(la.lines[i].seg.a * 1000.0, lb.lines[i].seg.a),
                                  distance(la.lines[i].seg.b * 1000.0, lb.lines[i].seg.b));
        worst = std::max(worst, d / b.map.bbox().diagonal());
        v.require(d <= tol, tag + ": line " + std::to_string(i) + " off by " + fmt(d));
      }
    }
  }
  fs::remove_all(root);
  if (v.pass) {
    v.detail << compared << " file comparisons identical across runs and 1/4 workers; x1000 max endpoint error "
             << fmt(worst, 3) << " of diagonal";
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--strict") strict = true;
  }
  const std::string data = AXIALGEN_DATA;

  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"isovist_oracle", isovist_oracle},
      {"medial_fidelity", medial_fidelity},
      {"bucket_self_containment", bucket_containment},
      {"grid_line_count", grid_line_count},
      {"degenerate_scenes", degenerate_scenes},
      {"reduction_invariants", reduction_invariants},
      {"cross_strategy", cross_strategy},
      {"determinism_scale", [&](Verdict& v) { determinism_scale(v, data); }},
  };

  int failed = 0, unexpected = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const bool known = kKnownFailures.count(name) > 0;
    std::string tail;
    if (!v.pass) {
      ++failed;
      if (known) tail = " [known]";
      else ++unexpected;
    } else if (known) {
      tail = " [listed as known failure]";
      ++unexpected;
    }
    std::printf("%s %s: %s%s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.str().c_str(), tail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed, %d unexpected\n", criteria.size(), failed, unexpected);
  return (strict ? failed : unexpected) > 0 ? 1 : 0;
}
