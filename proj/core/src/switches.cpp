// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/switches.hpp"

#include <algorithm>
#include <cmath>

namespace toppmpc::topp {

namespace {

bool inside_sep(const PathSpline& path, const geom::Polygon2& sep, double s) {
  const Vec3 p = path.position(s);
  return sep.contains(Vec2(p.x(), p.y()));
}

double bisect_boundary(const PathSpline& path, const geom::Polygon2& sep, double lo, double hi,
                       bool lo_inside) {
  // Shrink [lo, hi] to resolution 1e-4 around a membership flip.
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    if (inside_sep(path, sep, mid) == lo_inside) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SepCrossings sep_crossings(const PathSpline& path, const geom::Polygon2& sep) {
  SepCrossings out;
  const double s_max = path.s_max();
  const int n = std::max(64, int(s_max / 1e-3));
  const double step = s_max / n;

  std::vector<bool> inside(static_cast<size_t>(n + 1));
  for (int i = 0; i <= n; ++i) inside[size_t(i)] = inside_sep(path, sep, std::min(s_max, i * step));
  if (std::find(inside.begin(), inside.end(), true) == inside.end()) {
    out.status = SepCrossings::Status::NoCrossing;
    return out;
  }

  if (inside.front()) {
    out.s_first = 0.0;  // contained start
  } else {
    int i = 0;
    while (!inside[size_t(i + 1)]) ++i;
    out.s_first = bisect_boundary(path, sep, i * step, (i + 1) * step, false);
  }
  if (inside.back()) {
    out.s_second = s_max;  // contained end
  } else {
    int i = n;
    while (!inside[size_t(i - 1)]) --i;
    out.s_second = bisect_boundary(path, sep, (i - 1) * step, std::min(s_max, i * step), true);
  }
  out.status = SepCrossings::Status::Ok;
  return out;
}

RetimeResult retime_with_switch(const SwitchProblem& prob, double s1) {
  StanceSchedule schedule;
  const double s_max = prob.path.s_max();
  if (s1 > 1e-12) schedule.intervals.push_back({0.0, s1, prob.ds1_cone});
  schedule.intervals.push_back({s1, prob.s2, prob.ss_cone});
  if (prob.s2 < s_max - 1e-12) schedule.intervals.push_back({prob.s2, s_max, prob.ds2_cone});
  else schedule.intervals.back().s_hi = s_max;

  RetimeProblem rp;
  rp.path = prob.path;
  rp.constraints = stance_constraints(prob.path, schedule, prob.gravity, prob.options);
  rp.sd_start = prob.sd_start;
  rp.sd_end_max = prob.sd_end_max;
  rp.ds = prob.ds;
  return retime(rp);
}

SwitchSearchResult min_feasible_switch(const SwitchProblem& prob, double s1_upper,
                                       double resolution) {
  SwitchSearchResult out;
  out.feasible_at_upper = retime_with_switch(prob, s1_upper).ok();
  if (!out.feasible_at_upper) {
    out.s1_critical = s1_upper;
    return out;
  }
  if (retime_with_switch(prob, 0.0).ok()) {
    out.s1_critical = 0.0;
    return out;
  }
  double lo = 0.0, hi = s1_upper;  // lo infeasible, hi feasible
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (retime_with_switch(prob, mid).ok()) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.s1_critical = hi;
  return out;
}

}  // namespace toppmpc::topp
