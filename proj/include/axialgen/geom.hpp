#pragma once

// Geometric kernel: points, rings, the free-space polygon with holes,
// containment, ray casting, visibility polygons and segment/polygon overlap.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "axialgen/error.hpp"

namespace axialgen {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2() = default;
  // Rejects NaN and infinite coordinates.
  Point2(double px, double py);

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline Point2 lerp(Point2 a, Point2 b, double t) { return a + (b - a) * t; }

double point_segment_distance(Point2 p, Point2 a, Point2 b);
Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b);
double segment_segment_distance(Point2 a, Point2 b, Point2 c, Point2 d);
// True if closed segments ab and cd share at least one point (within tol).
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d, double tol);

struct Segment {
  Point2 a;
  Point2 b;

  Segment() = default;
  Segment(Point2 pa, Point2 pb) : a(pa), b(pb) {}

  double length() const { return distance(a, b); }
  Point2 midpoint() const { return lerp(a, b, 0.5); }
  Point2 direction() const;  // unit vector a -> b
};

// Validating factory: endpoints must differ by more than tol.
Segment make_segment(Point2 a, Point2 b, double tol = 0.0);

// Closed ring stored without the repeated closing vertex.
using Ring = std::vector<Point2>;

double signed_area(const Ring& ring);
double ring_perimeter(const Ring& ring);
bool ring_is_simple(const Ring& ring, double tol);
// Closed containment: points within tol of the boundary count as inside.
bool point_in_ring(Point2 p, const Ring& ring, double tol);
double distance_to_ring(Point2 p, const Ring& ring);

struct BBox {
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  double diagonal() const { return std::hypot(max_x - min_x, max_y - min_y); }
};

BBox bounding_box(const Ring& ring);

struct BoundaryEdge {
  Point2 a;
  Point2 b;
  int ring = 0;   // 0 = outer, 1.. = holes
  int index = 0;  // edge i joins vertex i and i+1 of its ring
};

// Open space: an outer boundary with closed spaces (buildings, blocks) as
// holes. Immutable once built; obtain one through build_free_space().
class FreeSpaceMap {
 public:
  const Ring& outer() const { return rings_.front(); }
  std::span<const Ring> holes() const {
    return std::span<const Ring>(rings_).subspan(1);
  }
  // Ring 0 is the outer boundary, rings 1.. are the holes.
  const Ring& ring(std::size_t i) const { return rings_[i]; }
  std::size_t ring_count() const { return rings_.size(); }
  std::span<const BoundaryEdge> edges() const { return edges_; }

  const BBox& bbox() const { return bbox_; }
  double epsilon() const { return epsilon_; }
  double free_area() const { return free_area_; }

 private:
  friend FreeSpaceMap build_free_space(Ring outer, std::vector<Ring> holes);
  FreeSpaceMap() = default;

  std::vector<Ring> rings_;
  std::vector<BoundaryEdge> edges_;
  BBox bbox_;
  double epsilon_ = 0.0;
  double free_area_ = 0.0;
};

// Validates the rings and normalizes orientation (outer CCW, holes CW).
// A repeated closing vertex is accepted and dropped.
FreeSpaceMap build_free_space(Ring outer, std::vector<Ring> holes);

bool contains(const FreeSpaceMap& map, Point2 p);
double distance_to_boundary(const FreeSpaceMap& map, Point2 p);
// True if the closed segment stays in free space (touching walls allowed).
bool segment_in_free_space(const FreeSpaceMap& map, Point2 a, Point2 b);

struct Isovist {
  Point2 viewpoint;
  Ring boundary;  // counter-clockwise
  double area = 0.0;
};

Isovist compute_isovist(const FreeSpaceMap& map, Point2 viewpoint);

struct Ray {
  Segment seg;
  Point2 origin;
  double length = 0.0;
  int id = 0;
};

// Extent of the maximal free-space chord through p along a unit direction:
// the chord is p + t*dir for t in [t_min, t_max], t_min <= 0 <= t_max.
// `min_edge`/`max_edge` index the boundary edges that stop it.
struct ChordExtent {
  double t_min = 0.0;
  double t_max = 0.0;
  int min_edge = -1;
  int max_edge = -1;
};

ChordExtent chord_extent(const FreeSpaceMap& map, Point2 p, Point2 unit_dir);

Ray cast_ray(const FreeSpaceMap& map, Point2 p, Point2 direction);

// A polygon with holes; buckets are stored as lists of these.
struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

double polygon_area(const Polygon& poly);
bool point_in_polygon(Point2 p, const Polygon& poly, double tol);

// Total length of seg inside the closed polygon (boundary counts as inside).
double length_inside(const Segment& seg, const Ring& poly);
double length_inside(const Segment& seg, std::span<const Polygon> parts);

}  // namespace axialgen
