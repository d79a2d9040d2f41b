// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "toppmpc/log.hpp"

namespace toppmpc::sim {

ReducedRobotState integrate_step(const ReducedRobotState& robot, const Vec3& a_com,
                                 const std::optional<Vec3>& a_swing, double dt) {
  ReducedRobotState next = robot;
  next.v_com += a_com * dt;
  next.p_com += next.v_com * dt;
  if (a_swing) {
    next.v_swing += *a_swing * dt;
    next.p_swing += next.v_swing * dt;
  }
  return next;
}

AuditRecord audit_feasibility(const ReducedRobotState& robot, const Vec3& a_com,
                              const std::vector<ContactPatch>& stance, double mass,
                              const Vec3& gravity) {
  AuditRecord rec;
  Vec3 origin = Vec3::Zero();
  for (const ContactPatch& p : stance) origin += p.center;
  origin /= double(stance.size());

  const Wrench w = geom::gravito_inertial_wrench(mass, robot.p_com, a_com, gravity, origin);
  const geom::WrenchConeMatrix cone = geom::stance_wrench_cone(stance, origin);
  rec.max_facet_value = cone.max_facet_value(w);

  const auto forces = geom::feasible_contact_forces(stance, w, origin);
  rec.feasible = forces.has_value();
  if (forces) rec.normal_sum = forces->normal_sum;
  return rec;
}

Stats compute_stats(const std::vector<double>& xs) {
  Stats s;
  s.count = int(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / double(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  s.stddev = xs.size() > 1 ? std::sqrt(var / double(xs.size() - 1)) : 0.0;
  return s;
}

ReducedRobotState default_initial_state(const std::vector<ContactPatch>& footsteps,
                                        const ControllerConfig& cfg) {
  if (footsteps.size() < 2) throw std::invalid_argument("need at least two footsteps");
  ReducedRobotState st;
  const Vec3 mid = 0.5 * (footsteps[0].center + footsteps[1].center);
  st.p_com = mid + Vec3(0, 0, cfg.com_height);
  st.p_swing = footsteps[0].center;  // trailing foot lifts first
  return st;
}

namespace {

double patch_slope_deg(const ContactPatch& p) {
  return std::acos(std::clamp(p.normal.z(), -1.0, 1.0)) * 180.0 / 3.14159265358979323846;
}

}  // namespace

SimLog run_simulation(const Scenario& scenario) {
  SimLog log;
  const std::vector<ContactPatch> footsteps = terrain_footsteps(scenario.terrain, scenario.seed);
  loco::Controller controller(footsteps, scenario.config, scenario.mass, scenario.gravity);
  ReducedRobotState robot = scenario.initial_state
                                ? *scenario.initial_state
                                : default_initial_state(footsteps, scenario.config);

  const double dt = scenario.config.period;
  double time = 0.0;
  Phase prev_phase = Phase::DoubleSupport;
  int prev_step = 0;
  double phase_start = 0.0;

  std::vector<double> ds_dur, ss_dur, ds_ms, ss_ms;

  auto close_phase = [&](Phase phase, int step, double now) {
    PhaseRecord pr;
    pr.phase = phase;
    pr.step_index = step;
    pr.start_time = phase_start;
    pr.duration = now - phase_start;
    const size_t ending = (phase == Phase::DoubleSupport) ? size_t(step) + 1 : size_t(step) + 2;
    pr.slope_deg = patch_slope_deg(footsteps[std::min(ending, footsteps.size() - 1)]);
    log.phases.push_back(pr);
    (phase == Phase::DoubleSupport ? ds_dur : ss_dur).push_back(pr.duration);
    phase_start = now;
  };

  log.exit = ExitStatus::Timeout;
  while (time < scenario.max_time) {
    loco::TickCommands cmd = controller.tick(robot);

    if (cmd.phase != prev_phase || cmd.step_index != prev_step) {
      close_phase(prev_phase, prev_step, time);
      if (prev_phase == Phase::SingleSupport && cmd.phase == Phase::DoubleSupport) {
        // Touchdown: record the impact speed, then land the foot cleanly.
        // In DS(j) the just-landed foot is fs[j + 1].
        log.touchdown_speeds.push_back(robot.v_swing.norm());
        robot.v_swing = Vec3::Zero();
        robot.p_swing = footsteps[size_t(cmd.step_index) + 1].center;
      }
      prev_phase = cmd.phase;
      prev_step = cmd.step_index;
    }

    if (cmd.status == loco::TickStatus::PlannerFailed) {
      log.exit = ExitStatus::PlannerFailed;
      break;
    }

    const AuditRecord audit =
        audit_feasibility(robot, cmd.a_com, controller.fsm().stance, scenario.mass, scenario.gravity);
    if (!audit.feasible) ++log.audit_failures;

    TickRecord tick;
    tick.time = time;
    tick.phase = cmd.phase;
    tick.step_index = cmd.step_index;
    tick.status = cmd.status;
    tick.a_com = cmd.a_com;
    tick.a_swing = cmd.a_swing;
    tick.s_trans = cmd.plan.s_trans;
    tick.t_swing = cmd.plan.t_swing;
    tick.profile_duration = cmd.plan.com_profile.duration;
    tick.polygon_edges_mean = cmd.plan.polygon_edges_mean;
    tick.planning_seconds = cmd.planning_seconds;
    tick.audit_feasible = audit.feasible;
    tick.audit_max_facet = audit.max_facet_value;
    tick.p_com = robot.p_com;
    tick.p_swing = robot.p_swing;
    log.ticks.push_back(tick);

    (cmd.phase == Phase::DoubleSupport ? ds_ms : ss_ms).push_back(cmd.planning_seconds * 1e3);

    robot = integrate_step(robot, cmd.a_com,
                           cmd.phase == Phase::SingleSupport ? cmd.a_swing : std::nullopt, dt);
    time += dt;

    if (controller.terminal()) {
      const loco::PreviewTargets targets = controller.current_targets(robot);
      if ((robot.p_com - targets.p_com_goal).norm() <= scenario.config.d_trans) {
        close_phase(prev_phase, prev_step, time);
        log.exit = ExitStatus::Completed;
        break;
      }
    }
  }

  log.total_time = time;
  log.ds_durations = compute_stats(ds_dur);
  log.ss_durations = compute_stats(ss_dur);
  log.ds_planning_ms = compute_stats(ds_ms);
  log.ss_planning_ms = compute_stats(ss_ms);
  TOPPMPC_LOG(1, "simulation '" << scenario.name << "' ended after " << time << " s with "
                                << log.phases.size() << " phases");
  return log;
}

std::string SimLog::summary_csv() const {
  std::ostringstream os;
  os << "metric,count,mean,stddev\n";
  auto row = [&os](const char* name, const Stats& s) {
    os << name << "," << s.count << "," << s.mean << "," << s.stddev << "\n";
  };
  row("ds_duration_s", ds_durations);
  row("ss_duration_s", ss_durations);
  row("ds_planning_ms", ds_planning_ms);
  row("ss_planning_ms", ss_planning_ms);
  os << "audit_failures," << audit_failures << ",,\n";
  os << "touchdowns," << touchdown_speeds.size() << ",,\n";
  return os.str();
}

}  // namespace toppmpc::sim
