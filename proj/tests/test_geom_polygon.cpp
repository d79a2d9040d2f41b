// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "toppmpc/polygon.hpp"

using namespace toppmpc;
using namespace toppmpc::geom;

TEST_CASE("convex hull of square corners plus center") {
  std::vector<Vec2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  Polygon2 hull = convex_hull_2d(pts);
  REQUIRE(!hull.degenerate);
  CHECK(hull.vertices.size() == 4);
  CHECK(hull.area() == doctest::Approx(1.0));
}

TEST_CASE("three non-collinear points come back CCW") {
  Polygon2 hull = convex_hull_2d({{0, 0}, {1, 0}, {0, 1}});
  REQUIRE(hull.vertices.size() == 3);
  double cross_sum = 0;
  for (size_t i = 0; i < 3; ++i) {
    const Vec2 a = hull.vertices[(i + 1) % 3] - hull.vertices[i];
    const Vec2 b = hull.vertices[(i + 2) % 3] - hull.vertices[(i + 1) % 3];
    cross_sum += a.x() * b.y() - a.y() * b.x();
  }
  CHECK(cross_sum > 0);  // CCW turns
}

TEST_CASE("hull containment oracle on random point clouds") {
  testutil::Rng rng(11);
  std::vector<Vec2> pts;
  for (int i = 0; i < 1000; ++i) {
    pts.emplace_back(testutil::uniform(rng, -2, 2), testutil::uniform(rng, -2, 2));
  }
  Polygon2 hull = convex_hull_2d(pts);
  REQUIRE(!hull.degenerate);
  for (const Vec2& p : pts) CHECK(hull.contains(p, 1e-7));
  // every hull vertex is one of the inputs
  for (const Vec2& v : hull.vertices) {
    bool found = false;
    for (const Vec2& p : pts) found |= (p - v).norm() < 1e-12;
    CHECK(found);
  }
}

TEST_CASE("degenerate hulls are flagged") {
  CHECK(convex_hull_2d({{1, 1}}).degenerate);
  CHECK(convex_hull_2d({{1, 1}, {2, 2}}).degenerate);
  CHECK(convex_hull_2d({{0, 0}, {1, 1}, {2, 2}, {3, 3}}).degenerate);
}

namespace {

HalfplaneSet box_set(double hx, double hy) {
  HalfplaneSet h = HalfplaneSet::empty();
  h.append(Vec2(1, 0), hx);
  h.append(Vec2(-1, 0), hx);
  h.append(Vec2(0, 1), hy);
  h.append(Vec2(0, -1), hy);
  return h;
}

// Grid-search oracle for the largest inscribed disk, three refinement rounds.
std::pair<Vec2, double> chebyshev_grid_oracle(const HalfplaneSet& h, Vec2 lo, Vec2 hi) {
  Vec2 best_x = 0.5 * (lo + hi);
  double best_r = -1e9;
  for (int round = 0; round < 6; ++round) {
    const int n = 60;
    Vec2 round_best = best_x;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const Vec2 x(lo.x() + (hi.x() - lo.x()) * i / n, lo.y() + (hi.y() - lo.y()) * j / n);
        double r = 1e18;
        for (int k = 0; k < h.size(); ++k) {
          r = std::min(r, (h.c(k) - h.B.row(k).dot(x)) / h.B.row(k).norm());
        }
        if (r > best_r) {
          best_r = r;
          round_best = x;
        }
      }
    }
    best_x = round_best;
    const Vec2 span = 2.0 * (hi - lo) / 60.0;
    lo = best_x - span;
    hi = best_x + span;
  }
  return {best_x, best_r};
}

}  // namespace

TEST_CASE("chebyshev center of the unit box") {
  ChebyshevResult r = chebyshev_center(box_set(1, 1));
  REQUIRE(r.status == PolyStatus::Ok);
  CHECK(r.center.norm() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.radius == doctest::Approx(1.0));
}

TEST_CASE("chebyshev center of a triangle against grid search") {
  HalfplaneSet h = HalfplaneSet::empty();
  h.append(Vec2(-1, 0), 0);  // x >= 0
  h.append(Vec2(0, -1), 0);  // y >= 0
  h.append(Vec2(1, 1), 1);   // x + y <= 1
  ChebyshevResult r = chebyshev_center(h);
  REQUIRE(r.status == PolyStatus::Ok);
  const double expected = 1.0 - 1.0 / std::sqrt(2.0);
  CHECK(r.center.x() == doctest::Approx(expected).epsilon(1e-6));
  CHECK(r.center.y() == doctest::Approx(expected).epsilon(1e-6));

  auto [gx, gr] = chebyshev_grid_oracle(h, Vec2(0, 0), Vec2(1, 1));
  CHECK(r.radius == doctest::Approx(gr).epsilon(1e-5));
  CHECK((r.center - gx).norm() < 1e-4);
}

TEST_CASE("contradictory halfplanes give EmptyPolygon") {
  HalfplaneSet h = HalfplaneSet::empty();
  h.append(Vec2(1, 0), -1);   // x <= -1
  h.append(Vec2(-1, 0), -1);  // x >= 1
  CHECK(chebyshev_center(h).status == PolyStatus::EmptyPolygon);
}

TEST_CASE("unbounded sets are reported") {
  HalfplaneSet h = HalfplaneSet::empty();
  h.append(Vec2(0, -1), 0);  // y >= 0 only
  CHECK(chebyshev_center(h).status == PolyStatus::UnboundedPolygon);
  CHECK(polygon_from_dual_hull(h).status == PolyStatus::UnboundedPolygon);

  HalfplaneSet stripe = HalfplaneSet::empty();
  stripe.append(Vec2(0, 1), 1);
  stripe.append(Vec2(0, -1), 1);
  stripe.append(Vec2(1, 0), 5);
  CHECK(polygon_from_dual_hull(stripe).status == PolyStatus::UnboundedPolygon);
}

TEST_CASE("dual hull recovers a box") {
  PolygonResult r = polygon_from_dual_hull(box_set(2, 4));
  REQUIRE(r.status == PolyStatus::Ok);
  CHECK(r.polygon.vertices.size() == 4);
  CHECK(r.polygon.area() == doctest::Approx(2 * 2 * 2 * 4.0));
  CHECK(r.polygon.contains(Vec2(1.9, 3.9)));
  CHECK(!r.polygon.contains(Vec2(2.1, 0)));
}

TEST_CASE("dual hull drops redundant rows around a known hexagon") {
  testutil::Rng rng(3);
  HalfplaneSet h = HalfplaneSet::empty();
  std::vector<Vec2> normals;
  for (int k = 0; k < 6; ++k) {
    const double a = 2 * M_PI * k / 6.0;
    normals.emplace_back(std::cos(a), std::sin(a));
    h.append(normals.back(), 1.0);
  }
  for (int i = 0; i < 139; ++i) {
    // random direction, right-hand side beyond the hexagon's support
    const double a = testutil::uniform(rng, 0, 2 * M_PI);
    const Vec2 n(std::cos(a), std::sin(a));
    h.append(n, 1.2 + testutil::uniform(rng, 0.0, 3.0));
  }
  REQUIRE(h.size() == 145);
  PolygonResult r = polygon_from_dual_hull(h);
  REQUIRE(r.status == PolyStatus::Ok);
  CHECK(r.polygon.vertices.size() == 6);
  CHECK(r.active_halfplanes == 6);
  for (int idx : r.active_indices) CHECK(idx < 6);
}

TEST_CASE("dual hull with origin outside: shifted via Chebyshev center") {
  // box [3, 5] x [2, 4]: every c_i mixed sign after writing with outward rows
  HalfplaneSet h = HalfplaneSet::empty();
  h.append(Vec2(1, 0), 5);
  h.append(Vec2(-1, 0), -3);  // x >= 3
  h.append(Vec2(0, 1), 4);
  h.append(Vec2(0, -1), -2);  // y >= 2
  PolygonResult r = polygon_from_dual_hull(h);
  REQUIRE(r.status == PolyStatus::Ok);
  CHECK(r.polygon.vertices.size() == 4);
  CHECK(r.polygon.contains(Vec2(4, 3)));
  CHECK(r.polygon.area() == doctest::Approx(4.0));
}

TEST_CASE("dual hull equals direct clipping on random halfplane sets") {
  testutil::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    HalfplaneSet h = HalfplaneSet::empty();
    const Vec2 center(testutil::uniform(rng, -2, 2), testutil::uniform(rng, -2, 2));
    const int m = 5 + int(trial % 12);
    for (int i = 0; i < m; ++i) {
      const double a = testutil::uniform(rng, 0, 2 * M_PI);
      const Vec2 n(std::cos(a), std::sin(a));
      h.append(n, n.dot(center) + testutil::uniform(rng, 0.2, 2.0));
    }
    // close the set with a box around the center
    h.append(Vec2(1, 0), center.x() + 5);
    h.append(Vec2(-1, 0), -center.x() + 5);
    h.append(Vec2(0, 1), center.y() + 5);
    h.append(Vec2(0, -1), -center.y() + 5);

    PolygonResult r = polygon_from_dual_hull(h);
    REQUIRE(r.status == PolyStatus::Ok);
    Polygon2 oracle = testutil::clip_intersection(h);
    REQUIRE(!oracle.degenerate);
    CHECK(hausdorff_distance(r.polygon, oracle) < 1e-8);

    // every output vertex satisfies every input halfplane
    for (const Vec2& v : r.polygon.vertices) CHECK(h.max_violation(v) < 1e-8);
  }
}

TEST_CASE("recursive projection of a cube onto the plane") {
  SupportOracle oracle = [](const Vec2& d) -> std::optional<Vec2> {
    // max d.(x,y) over |x|,|y|,|z| <= 1
    auto sgn = [](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); };
    return Vec2(d.x() == 0 ? 1.0 : sgn(d.x()), d.y() == 0 ? 1.0 : sgn(d.y()));
  };
  PolygonResult r = bretl_lall_projection(oracle, 1e-6);
  REQUIRE(r.status == PolyStatus::Ok);
  Polygon2 expected;
  expected.vertices = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  CHECK(hausdorff_distance(r.polygon, expected) < 1e-6);
}

TEST_CASE("projection tolerance refines monotonically on a disk") {
  SupportOracle disk = [](const Vec2& d) -> std::optional<Vec2> { return Vec2(d.normalized()); };
  size_t prev = 0;
  for (double tol : {0.1, 1e-2, 1e-4, 1e-6}) {
    PolygonResult r = bretl_lall_projection(disk, tol);
    REQUIRE(r.status == PolyStatus::Ok);
    CHECK(r.polygon.vertices.size() >= prev);
    prev = r.polygon.vertices.size();
  }
  CHECK(prev >= 32);  // tight tolerance means many supports on a smooth set
}

TEST_CASE("projection reports infeasible sets") {
  SupportOracle nothing = [](const Vec2&) -> std::optional<Vec2> { return std::nullopt; };
  CHECK(bretl_lall_projection(nothing, 1e-4).status == PolyStatus::InfeasibleSet);
}

TEST_CASE("projection and dual hull agree on random halfplane sets") {
  testutil::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    HalfplaneSet h = HalfplaneSet::empty();
    for (int i = 0; i < 10; ++i) {
      const double a = testutil::uniform(rng, 0, 2 * M_PI);
      h.append(Vec2(std::cos(a), std::sin(a)), testutil::uniform(rng, 0.5, 2.0));
    }
    h.append(Vec2(1, 0), 3);
    h.append(Vec2(-1, 0), 3);
    h.append(Vec2(0, 1), 3);
    h.append(Vec2(0, -1), 3);

    PolygonResult hull = polygon_from_dual_hull(h);
    REQUIRE(hull.status == PolyStatus::Ok);

    SupportOracle oracle = [&h](const Vec2& d) -> std::optional<Vec2> {
      // support point by scanning the exact polygon is cheating; use the
      // halfplane description directly through vertex enumeration of pairs
      double best = -1e18;
      std::optional<Vec2> arg;
      for (int i = 0; i < h.size(); ++i) {
        for (int j = i + 1; j < h.size(); ++j) {
          Eigen::Matrix2d s;
          s << h.B(i, 0), h.B(i, 1), h.B(j, 0), h.B(j, 1);
          if (std::abs(s.determinant()) < 1e-10) continue;
          const Eigen::Vector2d x = s.inverse() * Eigen::Vector2d(h.c(i), h.c(j));
          if (h.max_violation(x) < 1e-9 && d.dot(x) > best) {
            best = d.dot(x);
            arg = Vec2(x);
          }
        }
      }
      return arg;
    };
    PolygonResult proj = bretl_lall_projection(oracle, 1e-9);
    REQUIRE(proj.status == PolyStatus::Ok);
    CHECK(hausdorff_distance(hull.polygon, proj.polygon) < 1e-5);
  }
}
