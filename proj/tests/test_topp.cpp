// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "toppmpc/retime.hpp"

using namespace toppmpc;
using namespace toppmpc::topp;

namespace {

const Vec3 kGravity(0, 0, -9.81);

PathSpline unit_line() {
  interp::BoundaryState b;
  b.p_goal = Vec3(1, 0, 0);
  return interp::interpolate_preview_path(b).spline;  // exact straight segment
}

RetimeProblem line_problem(double sdd_bound, double sd_start = 0.0, double sd_end = 0.0,
                           double ds = 0.1) {
  RetimeProblem rp;
  rp.path = unit_line();
  rp.constraints = box_constraints(sdd_bound, 4.0);
  rp.sd_start = sd_start;
  rp.sd_end_max = sd_end;
  rp.ds = ds;
  return rp;
}

ContactPatch flat_patch(const Vec3& center) {
  return make_patch(center, Vec3::UnitZ(), Vec3::UnitX(), 0.112, 0.065, 0.7);
}

/// Walking-style COM preview above a support point.
PathSpline random_preview_path(testutil::Rng& rng, const Vec3& support_center) {
  interp::BoundaryState b;
  b.p_cur = support_center + Vec3(testutil::uniform(rng, -0.05, 0.05),
                                  testutil::uniform(rng, -0.05, 0.05),
                                  testutil::uniform(rng, 0.75, 0.85));
  b.p_goal = b.p_cur + Vec3(testutil::uniform(rng, 0.15, 0.35),
                            testutil::uniform(rng, -0.1, 0.1),
                            testutil::uniform(rng, -0.08, 0.08));
  b.v_cur = (Vec3::UnitX() + 0.3 * testutil::random_vec3(rng)).normalized();
  b.v_goal = (Vec3::UnitX() + 0.3 * testutil::random_vec3(rng)).normalized();
  return interp::interpolate_preview_path(b).spline;
}

}  // namespace

TEST_CASE("static equilibrium puts the origin inside the halfplane set") {
  const ContactPatch patch = flat_patch(Vec3::Zero());
  const geom::WrenchConeMatrix cone = geom::stance_wrench_cone({patch}, Vec3::Zero());

  interp::BoundaryState b;
  b.p_cur = Vec3(0, 0, 0.8);
  b.p_goal = Vec3(0.02, 0, 0.85);  // stays above the sole
  PathSpline path = interp::interpolate_preview_path(b).spline;

  HalfplaneSet h = topp_halfplanes_at(path, 0.0, cone, kGravity);
  CHECK(h.satisfied(Vec2::Zero(), 1e-9));  // c >= 0 <=> static equilibrium

  // COM far outside the support area: the origin must violate some row
  interp::BoundaryState out;
  out.p_cur = Vec3(0.6, 0, 0.8);
  out.p_goal = Vec3(0.8, 0, 0.8);
  PathSpline path_out = interp::interpolate_preview_path(out).spline;
  HalfplaneSet h_out = topp_halfplanes_at(path_out, 0.0, cone, kGravity);
  CHECK(h_out.max_violation(Vec2::Zero()) > 1e-9);
}

TEST_CASE("scaling all cone rows leaves the reduced polygon unchanged") {
  testutil::Rng rng(1);
  const ContactPatch patch = flat_patch(Vec3::Zero());
  geom::WrenchConeMatrix cone = geom::stance_wrench_cone({patch}, Vec3::Zero());
  PathSpline path = random_preview_path(rng, Vec3::Zero());

  geom::WrenchConeMatrix scaled = cone;
  scaled.rows *= 2.0;

  StanceSchedule s1 = StanceSchedule::single(cone, path.s_max());
  StanceSchedule s2 = StanceSchedule::single(scaled, path.s_max());
  for (double s : {0.0, 0.3, 0.7}) {
    auto a = constraint_polygon_at(path, s, s1, kGravity);
    auto b = constraint_polygon_at(path, s, s2, kGravity);
    REQUIRE(a.status == geom::PolyStatus::Ok);
    REQUIRE(b.status == geom::PolyStatus::Ok);
    CHECK(geom::hausdorff_distance(a.value.polygon, b.value.polygon) < 1e-8);
  }
}

TEST_CASE("reduced polygon sizes stay in the expected bands") {
  testutil::Rng rng(2);
  const ContactPatch support = flat_patch(Vec3::Zero());
  const ContactPatch next = flat_patch(Vec3(0.25, -0.19, 0.0));
  const geom::WrenchConeMatrix ss_cone = geom::stance_wrench_cone({support}, Vec3::Zero());
  const geom::WrenchConeMatrix ds_cone =
      geom::stance_wrench_cone({support, next}, Vec3(0.125, -0.095, 0));
  CHECK(ss_cone.facet_count() == 16);

  double ss_sum = 0, ds_sum = 0;
  int ss_n = 0, ds_n = 0;
  for (int t = 0; t < 60; ++t) {
    PathSpline path = random_preview_path(rng, Vec3::Zero());
    const double s = testutil::uniform(rng, 0.0, path.s_max());
    auto ss = constraint_polygon_at(path, s, StanceSchedule::single(ss_cone, path.s_max()), kGravity);
    auto ds = constraint_polygon_at(path, s, StanceSchedule::single(ds_cone, path.s_max()), kGravity);
    // previews wandering far off the stance may be genuinely infeasible
    if (ss.status == geom::PolyStatus::Ok) {
      CHECK(ss.value.reduced_count >= 2);
      CHECK(ss.value.reduced_count <= 8);
      ss_sum += ss.value.reduced_count;
      ++ss_n;
    }
    if (ds.status == geom::PolyStatus::Ok) {
      CHECK(ds.value.reduced_count >= 2);
      CHECK(ds.value.reduced_count <= 12);
      ds_sum += ds.value.reduced_count;
      ++ds_n;
    }
  }
  REQUIRE(ss_n >= 30);
  REQUIRE(ds_n >= 30);
  CHECK(ss_sum / ss_n <= 6.0);   // Single: ~3-4 after reduction
  CHECK(ds_sum / ds_n <= 10.0);  // Double: ~6 after reduction
}

TEST_CASE("dual-hull and projection methods build the same polygons") {
  testutil::Rng rng(3);
  const ContactPatch support = flat_patch(Vec3::Zero());
  const ContactPatch next = flat_patch(Vec3(0.25, -0.19, 0.02));
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool double_support = (trial % 2 == 1);
    std::vector<ContactPatch> stance{support};
    if (double_support) stance.push_back(next);
    const geom::WrenchConeMatrix cone = geom::stance_wrench_cone(stance, Vec3::Zero());
    PathSpline path = random_preview_path(rng, Vec3::Zero());
    const double s = testutil::uniform(rng, 0.0, path.s_max());
    const StanceSchedule schedule = StanceSchedule::single(cone, path.s_max());

    ConstraintOptions hull_opt, bl_opt;
    hull_opt.method = ReductionMethod::DualHull;
    bl_opt.method = ReductionMethod::BretlLall;
    auto a = constraint_polygon_at(path, s, schedule, kGravity, hull_opt);
    auto b = constraint_polygon_at(path, s, schedule, kGravity, bl_opt);
    const bool a_ok = a.status == geom::PolyStatus::Ok;
    const bool b_ok = b.status == geom::PolyStatus::Ok;
    CHECK(a_ok == b_ok);  // methods must agree about emptiness too
    if (!a_ok || !b_ok) continue;
    ++compared;
    CHECK(geom::hausdorff_distance(a.value.polygon, b.value.polygon) < 1e-5);
  }
  CHECK(compared >= 50);
}

TEST_CASE("bang-bang oracle: rest-to-rest unit line takes 2 s") {
  for (double ds : {0.1, 0.01}) {
    RetimeResult r = retime(line_problem(1.0, 0.0, 0.0, ds));
    REQUIRE(r.ok());
    CHECK(std::abs(r.profile.duration - 2.0) <= 2.0 * ds);
    // profile feasibility at every collocation point
    for (size_t i = 0; i + 1 < r.profile.b.size(); ++i) {
      CHECK(std::abs(r.profile.accel(i)) <= 1.0 + 1e-6);
      CHECK(r.profile.b[i] >= -1e-12);
    }
    CHECK(r.profile.b.back() <= 1e-9);  // terminal rest honored
  }
}

TEST_CASE("bang-bang oracle with running start") {
  // v0 = 1, vN = 0, length 1, |a| <= 1: accelerate to v_p then brake,
  // (v_p^2 - 1)/2 + v_p^2/2 = 1 -> v_p = sqrt(1.5), T = 2 v_p - 1.
  const double expected = 2.0 * std::sqrt(1.5) - 1.0;
  RetimeResult r = retime(line_problem(1.0, 1.0, 0.0, 0.1));
  REQUIRE(r.ok());
  CHECK(!r.profile.start_clamped);
  CHECK(std::abs(r.profile.duration - expected) <= 0.2);
}

TEST_CASE("empty polygon anywhere makes the problem non-parameterizable") {
  RetimeProblem rp = line_problem(1.0);
  rp.constraints = [](int i, double s) {
    if (i == 4) {
      ConstraintPolygonResult empty;
      empty.status = geom::PolyStatus::EmptyPolygon;
      empty.value.s = s;
      return empty;
    }
    return box_constraints(1.0, 4.0)(i, s);
  };
  RetimeResult r = retime(rp);
  CHECK(r.status == RetimeStatus::NonParameterizable);
  CHECK(r.infeasible_index == 4);
}

TEST_CASE("start velocity beyond the clamp tolerance fails, within it clamps") {
  // controllable start maximum: b must brake to 0 over length 1 at |a|<=1: b0max = 2
  RetimeResult hard = retime(line_problem(1.0, 1.6, 0.0, 0.1));  // b0 = 2.56 >> 2 * 1.05
  CHECK(hard.status == RetimeStatus::NonParameterizable);

  RetimeResult soft = retime(line_problem(1.0, std::sqrt(2.04), 0.0, 0.1));  // within 5%
  REQUIRE(soft.ok());
  CHECK(soft.profile.start_clamped);
}

TEST_CASE("grid refinement changes duration by O(ds)") {
  const double t1 = retime(line_problem(1.0, 0.0, 0.0, 0.1)).profile.duration;
  const double t2 = retime(line_problem(1.0, 0.0, 0.0, 0.05)).profile.duration;
  CHECK(std::abs(t1 - t2) <= 5.0 * 0.1);
}

TEST_CASE("tightening constraints never speeds the profile up") {
  testutil::Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const double bound = testutil::uniform(rng, 0.5, 2.0);
    RetimeProblem rp = line_problem(bound, 0.0, 0.0, 0.05);
    const double t_base = retime(rp).profile.duration;
    // intersect every polygon with a random extra halfplane through b <= cap
    const double tighter = testutil::uniform(rng, 0.3, 0.9);
    RetimeProblem tight = rp;
    tight.constraints = box_constraints(bound * tighter, 4.0 * tighter);
    RetimeResult r = retime(tight);
    REQUIRE(r.ok());
    CHECK(r.profile.duration >= t_base - 1e-9);
  }
}

TEST_CASE("no sampled feasible profile beats the solver duration") {
  // rejection-free sampling: b = min(forward random ramp, backward random ramp)
  const int n = 8;
  const double ds = 1.0 / n;
  RetimeResult solved = retime(line_problem(1.0, 0.0, 0.0, ds));
  REQUIRE(solved.ok());

  testutil::Rng rng(5);
  auto duration_of = [&](const std::vector<double>& b) {
    double t = 0;
    for (int i = 0; i < n; ++i) t += 2.0 * ds / (std::sqrt(b[size_t(i)]) + std::sqrt(b[size_t(i) + 1]));
    return t;
  };
  int valid = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> fwd(n + 1, 0.0), bwd(n + 1, 0.0), b(n + 1);
    for (int i = 0; i < n; ++i) {
      fwd[size_t(i) + 1] = fwd[size_t(i)] + 2 * ds * testutil::uniform(rng, 0.0, 1.0);
    }
    for (int i = n; i-- > 0;) {
      bwd[size_t(i)] = bwd[size_t(i) + 1] + 2 * ds * testutil::uniform(rng, 0.0, 1.0);
    }
    bool moving = true;
    for (int i = 0; i <= n; ++i) {
      b[size_t(i)] = std::min(fwd[size_t(i)], bwd[size_t(i)]);
      if (i > 0 && b[size_t(i)] <= 0 && b[size_t(i) - 1] <= 0) moving = false;
    }
    if (!moving) continue;
    // feasibility double-check against the box polygon
    bool feasible = true;
    for (int i = 0; i < n; ++i) {
      const double a = (b[size_t(i) + 1] - b[size_t(i)]) / (2 * ds);
      feasible &= std::abs(a) <= 1.0 + 1e-12 && b[size_t(i)] <= 4.0;
    }
    if (!feasible) continue;
    ++valid;
    CHECK(duration_of(b) >= solved.profile.duration - 1e-9);
  }
  CHECK(valid > 500);
}

TEST_CASE("solved profiles satisfy the raw unreduced halfplanes") {
  testutil::Rng rng(6);
  const ContactPatch support = flat_patch(Vec3::Zero());
  const ContactPatch next = flat_patch(Vec3(0.25, -0.19, 0.03));
  const geom::WrenchConeMatrix cone =
      geom::stance_wrench_cone({support, next}, Vec3(0.125, -0.095, 0));
  for (int trial = 0; trial < 10; ++trial) {
    PathSpline path = random_preview_path(rng, Vec3(0.12, -0.1, 0.0));
    StanceSchedule schedule = StanceSchedule::single(cone, path.s_max());
    RetimeProblem rp;
    rp.path = path;
    rp.constraints = stance_constraints(path, schedule, kGravity);
    rp.sd_start = 0.0;
    rp.sd_end_max = 0.5;
    rp.ds = 0.1;
    RetimeResult r = retime(rp);
    if (!r.ok()) continue;  // some random previews are genuinely infeasible
    auto raw = stance_raw_constraints(path, schedule, kGravity);
    for (size_t i = 0; i + 1 < r.profile.b.size(); ++i) {
      const HalfplaneSet h = raw(r.profile.s[i]);
      const Vec2 point(r.profile.accel(i), r.profile.b[i]);
      CHECK(h.max_violation(point) < 1e-6);
    }
  }
}

TEST_CASE("sddmax plumbing: direct substitution and monotone effect") {
  CHECK(sddmax_for_swing(1.0, 1.0, 0.0) == doctest::Approx(0.5));

  RetimeProblem rp = line_problem(1.0, 0.0, 0.0, 0.05);
  const double t_free = retime(rp).profile.duration;
  RetimeProblem capped = apply_sddmax(rp, 0.25, 1.0);
  RetimeResult r = retime(capped);
  REQUIRE(r.ok());
  CHECK(r.profile.duration >= t_free);
  for (size_t i = 0; i + 1 < r.profile.b.size(); ++i) {
    CHECK(r.profile.accel(i) <= 0.25 + 1e-9);
  }

  // infinite cap leaves the problem untouched
  RetimeProblem inf_cap = apply_sddmax(rp, 1e9, 1.0);
  CHECK(retime(inf_cap).profile.duration == doctest::Approx(t_free));
}

TEST_CASE("swing-synchronization guarantee holds on random feasible previews") {
  // t(s_trans) >= T_swing whenever sdd <= sddmax_for_swing over [0, s_trans]
  testutil::Rng rng(7);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double sdd_bound = testutil::uniform(rng, 0.5, 3.0);
    const double sd_start = testutil::uniform(rng, 0.0, 0.7);
    const double s_trans = testutil::uniform(rng, 0.3, 0.9);
    const double t_swing = testutil::uniform(rng, 0.3, 1.5);
    const double cap = sddmax_for_swing(s_trans, t_swing, sd_start);
    if (cap <= 0.0) continue;  // start already too fast for the bound

    RetimeProblem rp = line_problem(sdd_bound, sd_start, 0.0, 0.05);
    rp = apply_sddmax(std::move(rp), cap, s_trans);
    RetimeResult r = retime(rp);
    if (!r.ok() || r.profile.start_clamped) continue;
    ++checked;
    CHECK(r.profile.time_at(s_trans) >= t_swing - 1e-9);
  }
  CHECK(checked >= 50);
}

TEST_CASE("swing workspace constraints bound the per-axis acceleration") {
  testutil::Rng rng(8);
  interp::BoundaryState b;
  b.p_cur = Vec3(0, 0.19, 0);
  b.p_goal = Vec3(0.5, 0.19, 0.05);
  b.v_cur = Vec3(0.3, 0, 0.7).normalized();
  b.v_goal = Vec3(0.5, 0, -0.5).normalized();
  PathSpline path = interp::interpolate_preview_path(b).spline;

  const double a_max = 5.0, v_max = 1.5;
  RetimeProblem rp;
  rp.path = path;
  rp.constraints = swing_workspace_constraints(path, a_max, v_max);
  rp.sd_start = 0.0;
  rp.sd_end_max = 0.0;
  rp.ds = 0.1;
  RetimeResult r = retime(rp);
  REQUIRE(r.ok());
  CHECK(r.profile.duration > 0.1);
  for (size_t i = 0; i + 1 < r.profile.b.size(); ++i) {
    const double s = r.profile.s[i];
    const Vec3 acc = path.acceleration(s) * r.profile.b[i] + path.velocity(s) * r.profile.accel(i);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(acc[k]) <= a_max / std::sqrt(3.0) + 1e-6);
    const double speed = path.velocity(s).norm() * std::sqrt(r.profile.b[i]);
    CHECK(speed <= v_max + 1e-6);
  }
}
