// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <optional>

#include "toppmpc/constraints.hpp"

namespace toppmpc::topp {

/// Discrete squared-velocity profile b_i = sd^2(s_i) with its time map.
struct VelocityProfile {
  std::vector<double> s;
  std::vector<double> b;
  std::vector<double> t;
  double duration = 0.0;
  bool start_clamped = false;

  double ds() const { return s.size() > 1 ? s[1] - s[0] : 0.0; }
  /// Path acceleration over [s_i, s_i+1].
  double accel(size_t i) const { return (b[i + 1] - b[i]) / (2.0 * ds()); }
  double sd_at(double si) const;
  /// Time map evaluated between grid points (constant accel per cell).
  double time_at(double si) const;

  struct TimeSample {
    double s = 0.0;
    double sd = 0.0;
    double sdd = 0.0;
  };
  /// Inverse time map: path state when following this profile for `t`
  /// seconds (clamped to the profile end with zero acceleration).
  TimeSample sample_at_time(double t_query) const;
};

enum class RetimeStatus { Ok, NonParameterizable, Stalled };

struct RetimeProblem {
  PathSpline path;
  ConstraintProvider constraints;
  double sd_start = 0.0;
  double sd_end_max = std::numeric_limits<double>::infinity();
  double ds = 0.1;
  /// Extra sdd <= sdd_max bound over [0, sdd_max_until] (synchronization cap).
  std::optional<double> sdd_max;
  double sdd_max_until = 0.0;
  /// Start-velocity clamp tolerance (relative) before failing outright.
  double start_clamp_rel = 0.05;
};

struct RetimeResult {
  RetimeStatus status = RetimeStatus::NonParameterizable;
  VelocityProfile profile;
  int infeasible_index = -1;
  double infeasible_s = 0.0;
  double polygon_edges_mean = 0.0;  // reduced constraint count, averaged over the grid

  bool ok() const { return status == RetimeStatus::Ok; }
};

/// Reachability-style time-optimal retiming: a backward pass propagates the
/// controllable interval of b through each constraint polygon, a forward
/// pass rides its upper envelope.
RetimeResult retime(const RetimeProblem& problem);

/// Cap sdd <= sdd_max on every constraint polygon over [0, s_trans]. The
/// bound is one-sided: the synchronization argument needs only the upper
/// boundary, and braking stays unrestricted.
RetimeProblem apply_sddmax(RetimeProblem problem, double sdd_max, double s_trans);

/// Swing-synchronization acceleration cap:
///   sdd_max = [ (s_trans / T_swing)^2 - sd0^2 ] / (2 s_trans).
double sddmax_for_swing(double s_trans, double t_swing, double sd0);

}  // namespace toppmpc::topp
