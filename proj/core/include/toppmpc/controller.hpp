// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "toppmpc/retime.hpp"
#include "toppmpc/static_equilibrium.hpp"
#include "toppmpc/switches.hpp"

namespace toppmpc::loco {

using topp::ReductionMethod;

/// Point-mass COM plus rigid-body swing foot; angular momentum is held
/// constant and never touched by the controller.
struct ReducedRobotState {
  Vec3 p_com = Vec3::Zero();
  Vec3 v_com = Vec3::Zero();
  Vec3 p_swing = Vec3::Zero();
  Vec3 v_swing = Vec3::Zero();
  Vec3 angular_momentum = Vec3::Zero();
};

enum class Phase { DoubleSupport, SingleSupport };

/// Walking automaton over a footstep sequence fs[0..M-1]:
///   DS(k) supports {fs[k], fs[k+1]};
///   SS(k) supports {fs[k+1]} while the foot flies fs[k] -> fs[k+2].
/// The step index advances by one on each SS -> DS transition.
struct FsmState {
  Phase phase = Phase::DoubleSupport;
  int step_index = 0;
  std::vector<ContactPatch> stance;
  std::optional<ContactPatch> next_footstep;

  bool terminal(size_t footstep_count) const {
    return phase == Phase::DoubleSupport && size_t(step_index) + 2 >= footstep_count;
  }
};

FsmState make_initial_fsm(const std::vector<ContactPatch>& footsteps);

/// All durations in the system are solver outputs; this config carries no
/// phase timing of any kind.
struct ControllerConfig {
  double epsilon = 0.01;         // touchdown radius [m]
  double d_trans = 0.05;         // DS -> SS transition radius [m]
  double v_ref = 0.4;            // COM goal speed [m/s]
  double alpha = 0.5;            // landing-direction blend
  double beta = 0.3;             // takeoff-direction blend
  double safety_scale = 0.75;    // sole/friction downscale for constraints
  double ds = 0.1;               // TOPP discretization step (path index)
  double period = 0.04;          // control period [s]
  double swing_accel_max = 5.0;  // [m/s^2]
  double swing_vel_max = 1.5;    // [m/s]
  double com_height = 0.8;       // COM target height above support [m]
  int max_retries = 5;           // consecutive planner failures tolerated
  ReductionMethod reduction = ReductionMethod::DualHull;

  bool valid() const {
    return epsilon > 0 && d_trans > 0 && v_ref >= 0 && alpha > 0 && beta > 0 &&
           safety_scale > 0 && safety_scale <= 1.0 && ds > 0 && period > 0 &&
           swing_accel_max > 0 && swing_vel_max > 0 && com_height > 0;
  }
};

struct PreviewTargets {
  Vec3 p_com_goal = Vec3::Zero();
  Vec3 v_com_goal = Vec3::Zero();
  Vec3 p_swing_goal = Vec3::Zero();
  Vec3 v_swing_goal = Vec3::Zero();  // landing direction carrier
  Vec3 v_takeoff = Vec3::Zero();     // takeoff direction carrier
};

/// Targets per the preview-target rules: COM goal at the Chebyshev center of
/// the next single-support SEP, COM goal velocity v_ref along the ending
/// contact tangent, swing goal at the upcoming foothold with a forward-down
/// landing direction and forward-up takeoff direction.
PreviewTargets compute_preview_targets(const std::vector<ContactPatch>& footsteps,
                                       const FsmState& fsm, const ControllerConfig& cfg,
                                       const Vec3& gravity, double mass);

/// Geometric phase transitions; identity when no threshold is crossed.
FsmState fsm_step(const FsmState& state, const ReducedRobotState& robot,
                  const PreviewTargets& targets, const std::vector<ContactPatch>& footsteps,
                  const ControllerConfig& cfg);

/// Copies with sole half-extents and friction multiplied by safety_scale;
/// only used when building constraint cones.
std::vector<ContactPatch> scaled_stance(const std::vector<ContactPatch>& patches,
                                        const ControllerConfig& cfg);

struct PreviewPlan {
  interp::PathSpline com_path;
  topp::VelocityProfile com_profile;
  std::optional<interp::PathSpline> swing_path;
  std::optional<topp::VelocityProfile> swing_profile;
  double t_swing = 0.0;
  double s_trans = 0.0;
  bool hold = false;  // degenerate boundary: command zero acceleration
  double polygon_edges_mean = 0.0;
};

enum class PlanStatus { Ok, NonParameterizable };

struct PlanResult {
  PlanStatus status = PlanStatus::NonParameterizable;
  PreviewPlan plan;
  double infeasible_s = 0.0;
};

enum class TickStatus { Ok, DegradedHold, PlannerFailed };

struct TickCommands {
  TickStatus status = TickStatus::Ok;
  Vec3 a_com = Vec3::Zero();
  std::optional<Vec3> a_swing;
  Phase phase = Phase::DoubleSupport;
  int step_index = 0;
  PreviewPlan plan;
  double planning_seconds = 0.0;
};

/// The TOPP-MPC loop: per tick, run the FSM, rebuild preview targets, plan
/// the phase-appropriate previews and hand out the first accelerations of
/// the retimed trajectories.
class Controller {
 public:
  Controller(std::vector<ContactPatch> footsteps, ControllerConfig cfg, double mass,
             Vec3 gravity = Vec3(0, 0, -9.81));

  TickCommands tick(const ReducedRobotState& robot);

  const FsmState& fsm() const { return fsm_; }
  const ControllerConfig& config() const { return cfg_; }
  const std::vector<ContactPatch>& footsteps() const { return footsteps_; }
  PreviewTargets current_targets(const ReducedRobotState& robot) const;
  bool terminal() const { return fsm_.terminal(footsteps_.size()); }

  PlanResult plan_ss_preview(const ReducedRobotState& robot, const PreviewTargets& targets);
  PlanResult plan_ds_preview(const ReducedRobotState& robot, const PreviewTargets& targets);

 private:
  struct StanceCache {
    int step_index = -1;
    Phase phase = Phase::DoubleSupport;
    geom::WrenchConeMatrix scaled_ss;     // SS: support cone
    geom::WrenchConeMatrix scaled_ds;     // SS: upcoming DS cone / DS: current cone
    geom::Polygon2 support_sep;           // SS: SEP of the support foot
    PreviewTargets targets;
  };
  const StanceCache& cache_for(const FsmState& fsm);

  std::vector<ContactPatch> footsteps_;
  ControllerConfig cfg_;
  double mass_;
  Vec3 gravity_;
  FsmState fsm_;
  StanceCache cache_;
  int consecutive_failures_ = 0;
  TickCommands last_commands_;
  bool has_last_ = false;
  PreviewPlan held_plan_;
  Phase held_phase_ = Phase::DoubleSupport;
  int held_step_ = -1;
  double plan_age_ = 0.0;
  bool has_plan_ = false;
};

}  // namespace toppmpc::loco
