// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "toppmpc/retime.hpp"

namespace toppmpc::topp {

struct SepCrossings {
  enum class Status { Ok, NoCrossing } status = Status::NoCrossing;
  double s_first = 0.0;
  double s_second = 0.0;
};

/// First and last path indices where the horizontal (x, y) projection of the
/// path crosses the polygon boundary; a path that starts (ends) inside
/// reports 0 (s_max) by convention. Bisection resolution 1e-4 on s.
SepCrossings sep_crossings(const PathSpline& path, const geom::Polygon2& sep);

/// DS1 - SS - DS2 retiming problem with a movable first switch index.
struct SwitchProblem {
  PathSpline path;
  WrenchConeMatrix ds1_cone;
  WrenchConeMatrix ss_cone;
  WrenchConeMatrix ds2_cone;
  double s2 = 0.0;  // fixed second switch
  double sd_start = 0.0;
  double sd_end_max = std::numeric_limits<double>::infinity();
  double ds = 0.05;
  Vec3 gravity = Vec3(0, 0, -9.81);
  ConstraintOptions options;
};

RetimeResult retime_with_switch(const SwitchProblem& prob, double s1);

struct SwitchSearchResult {
  bool feasible_at_upper = false;
  double s1_critical = 0.0;
};

/// Smallest s1 (within `resolution`) for which the retiming succeeds,
/// searched over [0, s1_upper]. Requires feasibility at s1_upper.
SwitchSearchResult min_feasible_switch(const SwitchProblem& prob, double s1_upper,
                                       double resolution = 1e-3);

}  // namespace toppmpc::topp
