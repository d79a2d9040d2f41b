// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/constraints.hpp"

#include <cmath>

#include "toppmpc/lp.hpp"

namespace toppmpc::topp {

const WrenchConeMatrix& StanceSchedule::cone_at(double s) const {
  if (intervals.empty()) throw std::logic_error("StanceSchedule: empty");
  for (size_t i = 0; i + 1 < intervals.size(); ++i) {
    if (s >= intervals[i].s_lo && s < intervals[i].s_hi) return intervals[i].cone;
  }
  return intervals.back().cone;
}

bool StanceSchedule::covers(double lo, double hi, double tol) const {
  if (intervals.empty()) return false;
  if (intervals.front().s_lo > lo + tol) return false;
  double at = intervals.front().s_hi;
  for (size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].s_lo > at + tol) return false;
    at = intervals[i].s_hi;
  }
  return at >= hi - tol;
}

StanceSchedule StanceSchedule::single(const WrenchConeMatrix& cone, double s_max) {
  StanceSchedule schedule;
  schedule.intervals.push_back({0.0, s_max, cone});
  return schedule;
}

HalfplaneSet topp_halfplanes_at(const PathSpline& path, double s,
                                const WrenchConeMatrix& cone, const Vec3& gravity) {
  const Vec3 p = path.position(s) - cone.origin;
  const Vec3 ps = path.velocity(s);
  const Vec3 pss = path.acceleration(s);

  Wrench col_sdd, col_sd2, col_rhs;
  col_sdd.head<3>() = ps;
  col_sdd.tail<3>() = p.cross(ps);
  col_sd2.head<3>() = pss;
  col_sd2.tail<3>() = p.cross(pss);
  col_rhs.head<3>() = gravity;
  col_rhs.tail<3>() = p.cross(gravity);

  HalfplaneSet h;
  h.B.resize(cone.rows.rows(), 2);
  h.B.col(0) = cone.rows * col_sdd;
  h.B.col(1) = cone.rows * col_sd2;
  h.c = cone.rows * col_rhs;
  return h;
}

namespace {

HalfplaneSet with_caps(const HalfplaneSet& rows, const ConstraintOptions& opt) {
  HalfplaneSet h = rows;
  h.append(Vec2(0.0, -1.0), 0.0);            // sd2 >= 0
  h.append(Vec2(0.0, 1.0), opt.sd2_cap);     // sd2 <= cap
  h.append(Vec2(1.0, 0.0), opt.sdd_cap);     // sdd <= cap
  h.append(Vec2(-1.0, 0.0), opt.sdd_cap);    // -sdd <= cap
  return h;
}

// Support point of a 2D halfplane intersection, one exact geometric solve
// per query (the per-direction cost the recursive method is expected to
// pay). The generic simplex struggles with the scale spread between cone
// rows and cap rows, so the planar case is handled by clipping.
geom::SupportOracle halfplane_support_oracle(const HalfplaneSet& h, double box) {
  return [h, box](const Vec2& dir) -> std::optional<Vec2> {
    geom::Polygon2 feasible;
    feasible.vertices = {Vec2(-box, -box), Vec2(box, -box), Vec2(box, box), Vec2(-box, box)};
    for (int i = 0; i < h.size(); ++i) {
      feasible = geom::clip_polygon(feasible, Vec2(h.B(i, 0), h.B(i, 1)), h.c(i));
      if (feasible.degenerate) return std::nullopt;
    }
    if (feasible.vertices.empty()) return std::nullopt;
    double best = -std::numeric_limits<double>::infinity();
    Vec2 arg = feasible.vertices.front();
    for (const Vec2& v : feasible.vertices) {
      if (dir.dot(v) > best) {
        best = dir.dot(v);
        arg = v;
      }
    }
    return arg;
  };
}

}  // namespace

ConstraintPolygonResult reduce_constraint_set(const HalfplaneSet& rows, double s,
                                              const ConstraintOptions& opt) {
  ConstraintPolygonResult out;
  out.value.s = s;
  const int n_source = rows.size();
  const HalfplaneSet capped = with_caps(rows, opt);

  if (opt.method == ReductionMethod::DualHull) {
    geom::PolygonResult red = geom::polygon_from_dual_hull(capped);
    out.status = red.status;
    if (red.status != geom::PolyStatus::Ok) return out;
    out.value.polygon = red.polygon;
    out.value.reduced_count = 0;
    for (int idx : red.active_indices) {
      if (idx < n_source) ++out.value.reduced_count;
    }
  } else {
    geom::PolygonResult red =
        geom::bretl_lall_projection(halfplane_support_oracle(capped, 2.0 * std::max(opt.sdd_cap, opt.sd2_cap)), opt.bl_tol);
    if (red.status == geom::PolyStatus::InfeasibleSet) {
      out.status = geom::PolyStatus::EmptyPolygon;
      return out;
    }
    out.status = red.status;
    if (red.status != geom::PolyStatus::Ok) return out;
    if (red.polygon.degenerate) {
      out.status = geom::PolyStatus::EmptyPolygon;  // zero-area feasible set
      return out;
    }
    out.value.polygon = red.polygon;
    out.value.reduced_count = int(red.polygon.vertices.size());
  }
  if (out.value.polygon.vertices.size() < 3) out.status = geom::PolyStatus::EmptyPolygon;
  return out;
}

ConstraintPolygonResult constraint_polygon_at(const PathSpline& path, double s,
                                              const StanceSchedule& schedule, const Vec3& gravity,
                                              const ConstraintOptions& opt) {
  return reduce_constraint_set(topp_halfplanes_at(path, s, schedule.cone_at(s), gravity), s, opt);
}

ConstraintProvider stance_constraints(const PathSpline& path, StanceSchedule schedule,
                                      const Vec3& gravity, const ConstraintOptions& opt) {
  return [path, schedule = std::move(schedule), gravity, opt](int, double s) {
    return constraint_polygon_at(path, s, schedule, gravity, opt);
  };
}

RawConstraintProvider stance_raw_constraints(const PathSpline& path, StanceSchedule schedule,
                                             const Vec3& gravity) {
  return [path, schedule = std::move(schedule), gravity](double s) {
    return topp_halfplanes_at(path, s, schedule.cone_at(s), gravity);
  };
}

ConstraintProvider box_constraints(double sdd_bound, double sd2_bound) {
  return [sdd_bound, sd2_bound](int, double s) {
    ConstraintPolygonResult out;
    out.status = geom::PolyStatus::Ok;
    out.value.s = s;
    out.value.polygon.vertices = {Vec2(sdd_bound, 0.0), Vec2(sdd_bound, sd2_bound),
                                  Vec2(-sdd_bound, sd2_bound), Vec2(-sdd_bound, 0.0)};
    out.value.reduced_count = 4;
    return out;
  };
}

HalfplaneSet swing_workspace_rows(const PathSpline& path, double s, double a_max, double v_max) {
  const Vec3 ps = path.velocity(s);
  const Vec3 pss = path.acceleration(s);
  const double axis_bound = a_max / std::sqrt(3.0);
  HalfplaneSet h = HalfplaneSet::empty();
  for (int k = 0; k < 3; ++k) {
    const Vec2 row(ps[k], pss[k]);
    if (row.norm() < 1e-12) continue;  // axis not excited by this path
    h.append(row, axis_bound);
    h.append(-row, axis_bound);
  }
  if (ps.squaredNorm() > 1e-12) h.append(Vec2(0.0, ps.squaredNorm()), v_max * v_max);
  return h;
}

ConstraintProvider swing_workspace_constraints(const PathSpline& path, double a_max, double v_max,
                                               const ConstraintOptions& opt) {
  return [path, a_max, v_max, opt](int, double s) {
    return reduce_constraint_set(swing_workspace_rows(path, s, a_max, v_max), s, opt);
  };
}

RawConstraintProvider swing_workspace_raw(const PathSpline& path, double a_max, double v_max) {
  return [path, a_max, v_max](double s) { return swing_workspace_rows(path, s, a_max, v_max); };
}

}  // namespace toppmpc::topp
