// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "toppmpc/static_equilibrium.hpp"
#include "toppmpc/switches.hpp"

using namespace toppmpc;
using namespace toppmpc::topp;

namespace {

const Vec3 kGravity(0, 0, -9.81);

PathSpline straight_path(const Vec3& a, const Vec3& b) {
  interp::BoundaryState bs;
  bs.p_cur = a;
  bs.p_goal = b;
  return interp::interpolate_preview_path(bs).spline;
}

geom::Polygon2 square_sep(double half) {
  geom::Polygon2 p;
  p.vertices = {Vec2(-half, -half), Vec2(half, -half), Vec2(half, half), Vec2(-half, half)};
  return p;
}

/// Uphill scenario: flat start patch, steep low-friction middle patch,
/// upper patch. The stretch before the middle SEP is only dynamically
/// traversable under the middle patch's cone.
struct SlopeScenario {
  ContactPatch pa, pb, pc;
  SwitchProblem prob;
  double s1_star = 0.0, s2_star = 0.0;
};

SlopeScenario make_slope_scenario() {
  SlopeScenario sc;
  const double tilt = 25.0 * M_PI / 180.0;
  const Vec3 slope_normal(-std::sin(tilt), 0.0, std::cos(tilt));
  sc.pa = make_patch(Vec3(0, 0, 0), Vec3::UnitZ(), Vec3::UnitX(), 0.112, 0.065, 0.7);
  sc.pb = make_patch(Vec3(0.35, 0, 0.12), slope_normal, Vec3::UnitX(), 0.112, 0.065, 0.5);
  sc.pc = make_patch(Vec3(0.70, 0, 0.28), slope_normal, Vec3::UnitX(), 0.112, 0.065, 0.6);

  interp::BoundaryState bs;
  bs.p_cur = Vec3(0.0, 0.0, 0.78);
  bs.p_goal = Vec3(0.70, 0.0, 1.02);
  bs.v_cur = Vec3(1.0, 0.0, 0.35).normalized();
  bs.v_goal = Vec3(1.0, 0.0, 0.45).normalized();
  PathSpline path = interp::interpolate_preview_path(bs).spline;

  geom::PolygonResult sep = geom::static_equilibrium_polygon({sc.pb}, 38.0, kGravity);
  REQUIRE(sep.status == geom::PolyStatus::Ok);
  SepCrossings cross = sep_crossings(path, sep.polygon);
  REQUIRE(cross.status == SepCrossings::Status::Ok);
  sc.s1_star = cross.s_first;
  sc.s2_star = cross.s_second;

  sc.prob.path = path;
  sc.prob.ds1_cone = geom::stance_wrench_cone({sc.pa, sc.pb}, Vec3(0.17, 0, 0.06));
  sc.prob.ss_cone = geom::stance_wrench_cone({sc.pb}, sc.pb.center);
  sc.prob.ds2_cone = geom::stance_wrench_cone({sc.pb, sc.pc}, Vec3(0.52, 0, 0.2));
  sc.prob.s2 = sc.s2_star;
  sc.prob.sd_start = 0.0;
  sc.prob.sd_end_max = 0.6;
  sc.prob.ds = 0.04;
  sc.prob.gravity = kGravity;
  return sc;
}

}  // namespace

TEST_CASE("contained path reports the full index range") {
  PathSpline path = straight_path(Vec3(-0.05, 0, 0.8), Vec3(0.05, 0, 0.8));
  SepCrossings c = sep_crossings(path, square_sep(0.5));
  REQUIRE(c.status == SepCrossings::Status::Ok);
  CHECK(c.s_first == doctest::Approx(0.0));
  CHECK(c.s_second == doctest::Approx(path.s_max()));
}

TEST_CASE("chord through a square SEP matches the analytic entry and exit") {
  // the rest-to-rest segment is an exact straight line, linear in s
  PathSpline path = straight_path(Vec3(-1, 0.1, 0.8), Vec3(1, 0.1, 0.8));
  SepCrossings c = sep_crossings(path, square_sep(0.5));
  REQUIRE(c.status == SepCrossings::Status::Ok);
  CHECK(c.s_first == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(c.s_second == doctest::Approx(0.75).epsilon(1e-3));
}

TEST_CASE("paths that never enter the SEP report NoCrossing") {
  PathSpline path = straight_path(Vec3(-1, 5, 0.8), Vec3(1, 5, 0.8));
  CHECK(sep_crossings(path, square_sep(0.5)).status == SepCrossings::Status::NoCrossing);
}

TEST_CASE("quasi-static switch choice is feasible on the slope scenario") {
  SlopeScenario sc = make_slope_scenario();
  CHECK(sc.s1_star > 0.1);
  CHECK(sc.s2_star > sc.s1_star);
  RetimeResult r = retime_with_switch(sc.prob, sc.s1_star);
  CHECK(r.ok());
}

TEST_CASE("a dynamic switching window exists strictly inside (0, s1*)") {
  SlopeScenario sc = make_slope_scenario();
  SwitchSearchResult search = min_feasible_switch(sc.prob, sc.s1_star);
  REQUIRE(search.feasible_at_upper);
  CHECK(search.s1_critical > 1e-3);               // rest start cannot take the slope cone
  CHECK(search.s1_critical < sc.s1_star - 1e-3);  // but the switch may fire before SEP entry
  RetimeResult below = retime_with_switch(sc.prob, 0.5 * search.s1_critical);
  CHECK(below.status == RetimeStatus::NonParameterizable);
  RetimeResult at = retime_with_switch(sc.prob, search.s1_critical + 1e-3);
  CHECK(at.ok());
}

TEST_CASE("switch feasibility is monotone in s1") {
  SlopeScenario sc = make_slope_scenario();
  bool was_feasible = false;
  for (int i = 0; i <= 20; ++i) {
    const double s1 = sc.s1_star * i / 20.0;
    const bool ok = retime_with_switch(sc.prob, s1).ok();
    if (was_feasible) CHECK(ok);  // once feasible, stays feasible
    was_feasible = was_feasible || ok;
  }
  CHECK(was_feasible);
}
