#include <doctest.h>

#include <random>

#include "axialgen/clip.hpp"
#include "axialgen/geom.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

using namespace axialgen;
using scenes::rect;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

Point2 random_free_point(const FreeSpaceMap& map, std::mt19937_64& rng) {
  const BBox& b = map.bbox();
  std::uniform_real_distribution<double> ux(b.min_x, b.max_x), uy(b.min_y, b.max_y);
  for (;;) {
    const Point2 p{ux(rng), uy(rng)};
    if (contains(map, p) && distance_to_boundary(map, p) > 1e-3) return p;
  }
}

}  // namespace

TEST_CASE("build_free_space validates and normalizes") {
  const FreeSpaceMap sq = scenes::square();
  CHECK(sq.free_area() == doctest::Approx(100.0));
  CHECK(sq.epsilon() == doctest::Approx(1e-9 * std::sqrt(200.0)));

  const FreeSpaceMap holed = scenes::square_with_hole();
  CHECK(holed.free_area() == doctest::Approx(96.0));
  CHECK(signed_area(holed.outer()) > 0);
  CHECK(signed_area(holed.holes()[0]) < 0);

  // Clockwise input and a repeated closing vertex are accepted.
  Ring cw{{0, 0}, {0, 10}, {10, 10}, {10, 0}, {0, 0}};
  const FreeSpaceMap m = build_free_space(cw, {});
  CHECK(m.outer().size() == 4);
  CHECK(signed_area(m.outer()) > 0);

  CHECK(code_of([] { build_free_space(rect(0, 0, 10, 10), {rect(12, 12, 14, 14)}); }) ==
        ErrorCode::HoleOutsideOuter);
  CHECK(code_of([] { build_free_space(rect(0, 0, 10, 10), {rect(8, 8, 12, 12)}); }) ==
        ErrorCode::HoleOutsideOuter);
  CHECK(code_of([] { build_free_space({{0, 0}, {10, 10}, {10, 0}, {0, 10}}, {}); }) ==
        ErrorCode::SelfIntersectingRing);
  CHECK(code_of([] {
          build_free_space(rect(0, 0, 10, 10), {rect(2, 2, 5, 5), rect(4, 4, 7, 7)});
        }) == ErrorCode::OverlappingHoles);
  CHECK(code_of([] {
          build_free_space(rect(0, 0, 10, 10), {rect(2, 2, 8, 8), rect(4, 4, 6, 6)});
        }) == ErrorCode::NestedHoles);
  CHECK(code_of([] { build_free_space({{0, 0}, {1, 1}}, {}); }) == ErrorCode::DegenerateRing);
  CHECK(code_of([] { build_free_space({{0, 0}, {1, 1}, {2, 2}}, {}); }) ==
        ErrorCode::DegenerateRing);
  CHECK(code_of([] { Point2(std::nan(""), 0.0); }) == ErrorCode::NonFiniteCoordinate);
}

TEST_CASE("contains treats walls as inside and holes as outside") {
  const FreeSpaceMap m = scenes::square_with_hole();
  CHECK(contains(scenes::square(), {5, 5}));
  CHECK_FALSE(contains(m, {5, 5}));
  CHECK(contains(m, {10, 3}));
  CHECK(contains(m, {4, 5}));
  CHECK(contains(m, {0, 0}));
  CHECK_FALSE(contains(m, {10.5, 3}));
}

TEST_CASE("compute_isovist") {
  SUBCASE("convex room is fully visible") {
    const Isovist iso = compute_isovist(scenes::square(), {5, 5});
    CHECK(iso.area == doctest::Approx(100.0).epsilon(1e-9));
  }
  SUBCASE("L-shape matches the sampling oracle") {
    const FreeSpaceMap m = scenes::l_shape();
    const Isovist iso = compute_isovist(m, {2.5, 2.5});
    const double expected = oracle::sampled_isovist_area(m, {2.5, 2.5});
    CHECK(std::abs(iso.area - expected) <= 0.01 * expected);
    // The L is star-shaped about any point of its corner square.
    CHECK(iso.area == doctest::Approx(75.0));
  }
  SUBCASE("hole casts a shadow") {
    const FreeSpaceMap m = scenes::square_with_hole();
    const Isovist iso = compute_isovist(m, {1, 5});
    const double expected = oracle::sampled_isovist_area(m, {1, 5});
    CHECK(std::abs(iso.area - expected) <= 0.01 * expected);
  }
  SUBCASE("viewpoint inside a hole") {
    CHECK(code_of([] { compute_isovist(scenes::square_with_hole(), {5, 5}); }) ==
          ErrorCode::ViewpointOutsideFreeSpace);
  }
}

TEST_CASE("cast_ray") {
  const Ray r = cast_ray(scenes::square(), {5, 5}, {1, 0});
  CHECK(r.length == doctest::Approx(10.0));
  CHECK(std::min(r.seg.a.x, r.seg.b.x) == doctest::Approx(0.0));
  CHECK(r.seg.a.y == doctest::Approx(5.0));
  CHECK(r.origin == Point2{5, 5});

  const Ray blocked = cast_ray(scenes::square_with_hole(), {2, 5}, {1, 0});
  CHECK(blocked.length == doctest::Approx(4.0));
  CHECK(blocked.seg.a.x == doctest::Approx(0.0));
  CHECK(blocked.seg.b.x == doctest::Approx(4.0));

  CHECK(code_of([] { cast_ray(scenes::square(), {11, 5}, {1, 0}); }) ==
        ErrorCode::PointOutsideFreeSpace);

  // From a wall point the chord runs into the room.
  const Ray wall = cast_ray(scenes::square(), {0, 5}, {1, 0});
  CHECK(wall.length == doctest::Approx(10.0));
  // Grazing a hole corner does not stop the chord.
  const Ray graze = cast_ray(scenes::square_with_hole(), {1, 1}, {1, 1});
  CHECK(graze.length == doctest::Approx(std::sqrt(2.0) * 3.0 + std::sqrt(2.0)));
}

TEST_CASE("length_inside") {
  const Ring unit = rect(0, 0, 1, 1);
  CHECK(length_inside(Segment({0.2, 0.2}, {0.8, 0.7}), unit) ==
        doctest::Approx(distance({0.2, 0.2}, {0.8, 0.7})));
  CHECK(length_inside(Segment({-0.5, 0.5}, {0.5, 0.5}), unit) == doctest::Approx(0.5));
  CHECK(length_inside(Segment({2, 2}, {3, 3}), unit) == 0.0);
  // Non-convex ring: a U shape crossed twice.
  const Ring u{{0, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}};
  CHECK(length_inside(Segment({-1, 2}, {4, 2}), u) == doctest::Approx(2.0));
  // Polygon with a hole.
  const Polygon holed{rect(0, 0, 4, 4), {rect(1, 1, 3, 3)}};
  CHECK(length_inside(Segment({-1, 2}, {5, 2}), std::span<const Polygon>(&holed, 1)) ==
        doctest::Approx(2.0));
}

TEST_CASE("isovist properties on random viewpoints") {
  std::mt19937_64 rng(7);
  for (const FreeSpaceMap& m : {scenes::l_shape(), scenes::four_blocks(), scenes::grid()}) {
    const Point2 vp = random_free_point(m, rng);
    const Isovist iso = compute_isovist(m, vp);

    // Star shape: sight lines to boundary points stay in free space.
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, iso.boundary.size() - 1);
    for (int k = 0; k < 100; ++k) {
      const std::size_t i = pick(rng);
      const Point2 q =
          lerp(iso.boundary[i], iso.boundary[(i + 1) % iso.boundary.size()], u01(rng));
      CHECK(segment_in_free_space(m, vp, q));
    }

    // Isovist within free space.
    const double clipped = region_area(clip_to_free_space(iso.boundary, m));
    CHECK(std::abs(clipped - iso.area) <= 1e-3 * iso.area);
    CHECK(iso.area <= m.free_area() * (1 + 1e-9));
  }
}

TEST_CASE("cast_ray maximality and length_inside additivity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, 3.14159);
  const FreeSpaceMap m = scenes::grid();
  for (int k = 0; k < 50; ++k) {
    const Point2 p = random_free_point(m, rng);
    const double a = angle(rng);
    const Ray r = cast_ray(m, p, {std::cos(a), std::sin(a)});
    const Point2 d = r.seg.direction();
    // Extend by 10 eps of wall penetration: at grazing incidence a plain
    // 10 eps step along the ray stays inside the eps boundary band.
    const ChordExtent ext = chord_extent(m, r.origin, d);
    auto step = [&](int edge) {
      const BoundaryEdge& e = m.edges()[edge];
      const double sine = std::abs(cross(d, (e.b - e.a) * (1.0 / distance(e.a, e.b))));
      return 10 * m.epsilon() / std::max(sine, 1e-3);
    };
    CHECK_FALSE(contains(m, r.seg.b + d * step(ext.max_edge)));
    CHECK_FALSE(contains(m, r.seg.a - d * step(ext.min_edge)));
    CHECK(segment_in_free_space(m, r.seg.a, r.seg.b));

    const Ring poly = rect(20, 20, 70, 60);
    const Point2 mid = lerp(r.seg.a, r.seg.b, std::uniform_real_distribution<double>(0, 1)(rng));
    const double whole = length_inside(r.seg, poly);
    const double parts = length_inside(Segment(r.seg.a, mid), poly) +
                         length_inside(Segment(mid, r.seg.b), poly);
    CHECK(std::abs(whole - parts) <= m.epsilon() * 10);
  }
}

TEST_CASE("similarity equivariance of isovists and rays") {
  const double s = 37.5;
  const FreeSpaceMap a = scenes::grid(1.0), b = scenes::grid(s);
  for (const Point2 p : {Point2{35, 35}, Point2{5, 47}, Point2{64, 3}}) {
    const Isovist ia = compute_isovist(a, p), ib = compute_isovist(b, p * s);
    CHECK(std::abs(ib.area / (s * s) - ia.area) <= 1e-6 * ia.area);
    const Ray ra = cast_ray(a, p, {0.3, 0.8}), rb = cast_ray(b, p * s, {0.3, 0.8});
    CHECK(std::abs(rb.length / s - ra.length) <= 1e-6 * ra.length);
  }
}
