// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "toppmpc/controller.hpp"
#include "toppmpc/terrain.hpp"

namespace toppmpc::sim {

using loco::ControllerConfig;
using loco::Phase;
using loco::ReducedRobotState;

struct Scenario {
  Terrain terrain;
  double mass = 38.0;
  Vec3 gravity = Vec3(0, 0, -9.81);
  ControllerConfig config;
  std::optional<ReducedRobotState> initial_state;  // derived from stance when absent
  double max_time = 60.0;
  uint64_t seed = 0;
  std::string name = "scenario";
};

/// Semi-implicit Euler on both double integrators.
ReducedRobotState integrate_step(const ReducedRobotState& robot, const Vec3& a_com,
                                 const std::optional<Vec3>& a_swing, double dt);

struct AuditRecord {
  bool feasible = false;
  double max_facet_value = 0.0;  // <= 0 when inside the unscaled CWC
  double normal_sum = 0.0;
};

/// Ground-truth contact-stability check of a commanded COM acceleration
/// against the unscaled stance.
AuditRecord audit_feasibility(const ReducedRobotState& robot, const Vec3& a_com,
                              const std::vector<ContactPatch>& stance, double mass,
                              const Vec3& gravity);

struct TickRecord {
  double time = 0.0;
  Phase phase = Phase::DoubleSupport;
  int step_index = 0;
  loco::TickStatus status = loco::TickStatus::Ok;
  Vec3 a_com = Vec3::Zero();
  std::optional<Vec3> a_swing;
  double s_trans = 0.0;
  double t_swing = 0.0;
  double profile_duration = 0.0;
  double polygon_edges_mean = 0.0;
  double planning_seconds = 0.0;
  bool audit_feasible = true;
  double audit_max_facet = 0.0;
  Vec3 p_com = Vec3::Zero();
  Vec3 p_swing = Vec3::Zero();
};

struct PhaseRecord {
  Phase phase = Phase::DoubleSupport;
  int step_index = 0;
  double start_time = 0.0;
  double duration = 0.0;
  double slope_deg = 0.0;  // inclination of the phase's ending contact
};

struct Stats {
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

enum class ExitStatus { Completed, PlannerFailed, Timeout };

struct SimLog {
  ExitStatus exit = ExitStatus::Timeout;
  std::vector<TickRecord> ticks;
  std::vector<PhaseRecord> phases;
  std::vector<double> touchdown_speeds;
  int audit_failures = 0;
  Stats ds_durations, ss_durations;
  Stats ds_planning_ms, ss_planning_ms;
  double total_time = 0.0;

  std::string summary_csv() const;
};

Stats compute_stats(const std::vector<double>& xs);

/// Closed-loop run: controller tick, ground-truth audit, integration and
/// FSM bookkeeping until the final footstep (or failure / timeout).
SimLog run_simulation(const Scenario& scenario);

/// Default initial state: COM between the first two footholds, both feet
/// planted, everything at rest.
ReducedRobotState default_initial_state(const std::vector<ContactPatch>& footsteps,
                                        const ControllerConfig& cfg);

}  // namespace toppmpc::sim
