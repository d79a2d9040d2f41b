// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "toppmpc/hermite.hpp"
#include "toppmpc/polygon.hpp"
#include "toppmpc/wrench_cone.hpp"

namespace toppmpc::topp {

using geom::HalfplaneSet;
using geom::Polygon2;
using geom::WrenchConeMatrix;
using interp::PathSpline;

/// Which wrench cone holds over which slice of the path index range.
struct StanceInterval {
  double s_lo = 0.0;
  double s_hi = 0.0;
  WrenchConeMatrix cone;
};

struct StanceSchedule {
  std::vector<StanceInterval> intervals;

  /// Cone active at s (intervals are [lo, hi), last one closed).
  const WrenchConeMatrix& cone_at(double s) const;
  bool covers(double lo, double hi, double tol = 1e-9) const;

  static StanceSchedule single(const WrenchConeMatrix& cone, double s_max);
};

/// Contact-stability constraint rows at path index s, in canonical
/// B [sdd sd2]' <= c form. The robot mass cancels and does not appear.
HalfplaneSet topp_halfplanes_at(const PathSpline& path, double s,
                                const WrenchConeMatrix& cone, const Vec3& gravity);

enum class ReductionMethod { DualHull, BretlLall };

struct ConstraintOptions {
  ReductionMethod method = ReductionMethod::DualHull;
  /// Area tolerance handed to the recursive projection.
  double bl_tol = 1e-9;
  /// Bounding box keeping degenerate constraint sets (straight path
  /// segments cannot bound sd2) finite: |sdd| <= sdd_cap, sd2 <= sd2_cap.
  double sdd_cap = 1e4;
  double sd2_cap = 1e4;
};

/// Reduced feasible polygon in the (sdd, sd2)-plane at one grid point.
struct ConstraintPolygon {
  double s = 0.0;
  Polygon2 polygon;  // clipped to sd2 >= 0 and the option caps
  std::optional<double> sdd_max;  // extra vertical bounds, when applied
  /// Non-redundant cone inequalities after reduction (cap rows excluded).
  int reduced_count = 0;

  bool empty() const { return polygon.degenerate || polygon.vertices.size() < 3; }
};

struct ConstraintPolygonResult {
  geom::PolyStatus status = geom::PolyStatus::EmptyPolygon;
  ConstraintPolygon value;
};

ConstraintPolygonResult constraint_polygon_at(const PathSpline& path, double s,
                                              const StanceSchedule& schedule, const Vec3& gravity,
                                              const ConstraintOptions& opt = {});

/// Reduce an explicit halfplane set (already in the (sdd, sd2) plane).
ConstraintPolygonResult reduce_constraint_set(const HalfplaneSet& rows, double s,
                                              const ConstraintOptions& opt = {});

/// Per-grid-point constraint generator handed to the retiming solver.
using ConstraintProvider = std::function<ConstraintPolygonResult(int index, double s)>;
/// Unreduced rows at s, for feasibility audits of solved profiles.
using RawConstraintProvider = std::function<HalfplaneSet(double s)>;

ConstraintProvider stance_constraints(const PathSpline& path, StanceSchedule schedule,
                                      const Vec3& gravity, const ConstraintOptions& opt = {});
RawConstraintProvider stance_raw_constraints(const PathSpline& path, StanceSchedule schedule,
                                             const Vec3& gravity);

/// Constant box |sdd| <= sdd_bound, 0 <= sd2 <= sd2_bound at every point.
ConstraintProvider box_constraints(double sdd_bound, double sd2_bound);

/// Swing-foot workspace rows: per-axis |p_s_k sdd + p_ss_k sd2| <= a_max/sqrt(3)
/// and the squared-velocity row |p_s|^2 sd2 <= v_max^2.
HalfplaneSet swing_workspace_rows(const PathSpline& path, double s, double a_max, double v_max);
ConstraintProvider swing_workspace_constraints(const PathSpline& path, double a_max, double v_max,
                                               const ConstraintOptions& opt = {});
RawConstraintProvider swing_workspace_raw(const PathSpline& path, double a_max, double v_max);

}  // namespace toppmpc::topp
