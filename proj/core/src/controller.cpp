// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "toppmpc/log.hpp"

namespace toppmpc::loco {

namespace {

Vec3 stance_origin(const std::vector<ContactPatch>& patches) {
  Vec3 o = Vec3::Zero();
  for (const ContactPatch& p : patches) o += p.center;
  return o / double(patches.size());
}

double path_sd(const Vec3& velocity, const Vec3& tangent) {
  const double tn = tangent.norm();
  if (tn < 1e-9) return 0.0;
  return velocity.norm() / tn;
}

Vec3 initial_acceleration(const interp::PathSpline& path, const topp::VelocityProfile& prof) {
  if (prof.s.size() < 2) return Vec3::Zero();
  return path.acceleration(0.0) * prof.b[0] + path.velocity(0.0) * prof.accel(0);
}

Vec3 acceleration_along(const interp::PathSpline& path, const topp::VelocityProfile& prof,
                        double age) {
  const topp::VelocityProfile::TimeSample at = prof.sample_at_time(age);
  return path.acceleration(at.s) * at.sd * at.sd + path.velocity(at.s) * at.sdd;
}

/// Overdamped capture once a preview would degenerate: inside the hold
/// radius the target ball sits well within the stance SEP, so a small
/// regulation acceleration is always contact-stable. Overdamping hands the
/// next phase a near-rest state, which the swing synchronization cap needs.
Vec3 endgame_acceleration(const ReducedRobotState& robot, const Vec3& target) {
  // The cap keeps the implied CoP shift (a h / g) inside the two-foot
  // support polygon, whose lateral band is thin between the soles.
  constexpr double kp = 4.0, kd = 8.0, cap = 1.2;
  Vec3 a = kp * (target - robot.p_com) - kd * robot.v_com;
  const double n = a.norm();
  if (n > cap) a *= cap / n;
  return a;
}

/// Failure fallback in single support: bleed COM speed off where it stands
/// (the swing cap needs a near-rest entry, and the support SEP is right
/// underneath).
Vec3 braking_acceleration(const ReducedRobotState& robot) {
  // Single-support brake: the CoP shift a h / g must stay inside one sole
  // (~0.084 m at h = 0.8 m).
  constexpr double kd = 25.0, cap = 0.9;
  Vec3 a = -kd * robot.v_com;
  const double n = a.norm();
  if (n > cap) a *= cap / n;
  return a;
}

/// Touchdown capture: the last few centimeters of a swing get replanned
/// every tick into ever-shorter previews; an overdamped approach lands
/// gently instead.
constexpr double kSwingCaptureRadius = 0.06;  // [m]

Vec3 swing_capture_acceleration(const ReducedRobotState& robot, const Vec3& goal,
                                const Vec3& surface_normal, double a_max, double epsilon) {
  // Aim one touchdown radius through the surface so the approach crosses
  // the contact threshold instead of creeping onto it asymptotically.
  constexpr double kp = 30.0, kd = 14.0;
  const Vec3 aim = goal - 1.5 * epsilon * surface_normal;
  Vec3 a = kp * (aim - robot.p_swing) - kd * robot.v_swing;
  const double n = a.norm();
  if (n > a_max) a *= a_max / n;
  return a;
}

/// The COM preview boundary. A near-resting COM still needs a path
/// direction for the initial tangent (a zero tangent would pin the
/// commanded acceleration at zero, and a creeping misaligned velocity
/// would force a kinked path); the goal direction plays the same carrier
/// role the takeoff direction plays for the swing foot.
constexpr double kComRestSpeed = 0.08;  // [m/s]

interp::BoundaryState com_boundary(const ReducedRobotState& robot, const PreviewTargets& targets) {
  interp::BoundaryState b;
  b.p_cur = robot.p_com;
  b.p_goal = targets.p_com_goal;
  b.v_goal = targets.v_com_goal;
  if (robot.v_com.norm() > kComRestSpeed) {
    b.v_cur = robot.v_com;
  } else {
    const Vec3 delta = b.delta();
    b.v_cur = delta.norm() > 1e-9 ? Vec3(delta.normalized()) : Vec3::Zero();
  }
  return b;
}

/// Deepest point of a polygon, centralized: the Chebyshev LP may be
/// degenerate (any point along the middle segment of a rectangle), so the
/// optimal face is clipped out and averaged.
Vec2 polygon_deep_center(const geom::Polygon2& poly) {
  const geom::HalfplaneSet h = geom::halfplanes_of_polygon(poly);
  const geom::ChebyshevResult cc = geom::chebyshev_center(h);
  if (cc.status != geom::PolyStatus::Ok) {
    Vec2 mean = Vec2::Zero();
    for (const Vec2& v : poly.vertices) mean += v;
    return poly.vertices.empty() ? mean : Vec2(mean / double(poly.vertices.size()));
  }
  geom::Polygon2 face = poly;
  const double inset = cc.radius * (1.0 - 1e-6);
  for (int i = 0; i < h.size() && !face.vertices.empty(); ++i) {
    face = geom::clip_polygon(face, Vec2(h.B(i, 0), h.B(i, 1)), h.c(i) - inset);
  }
  if (face.vertices.empty()) return cc.center;
  Vec2 mean = Vec2::Zero();
  for (const Vec2& v : face.vertices) mean += v;
  return Vec2(mean / double(face.vertices.size()));
}

}  // namespace

FsmState make_initial_fsm(const std::vector<ContactPatch>& footsteps) {
  if (footsteps.size() < 2) throw std::invalid_argument("need at least two footsteps");
  FsmState fsm;
  fsm.phase = Phase::DoubleSupport;
  fsm.step_index = 0;
  fsm.stance = {footsteps[0], footsteps[1]};
  if (footsteps.size() > 2) fsm.next_footstep = footsteps[2];
  return fsm;
}

PreviewTargets compute_preview_targets(const std::vector<ContactPatch>& footsteps,
                                       const FsmState& fsm, const ControllerConfig& cfg,
                                       const Vec3& gravity, double mass) {
  PreviewTargets t;
  const size_t k = size_t(fsm.step_index);
  // Ending contact of the phase: fs[k+1] in DS(k), fs[k+2] in SS(k).
  const size_t ending = (fsm.phase == Phase::DoubleSupport) ? k + 1 : k + 2;
  if (ending >= footsteps.size()) throw std::logic_error("fsm index past footstep plan");
  const ContactPatch& contact = footsteps[ending];

  geom::PolygonResult sep = geom::static_equilibrium_polygon({contact}, mass, gravity, 1e-9);
  Vec2 center(contact.center.x(), contact.center.y());
  if (sep.status == geom::PolyStatus::Ok && !sep.polygon.degenerate) {
    center = polygon_deep_center(sep.polygon);
  }
  t.p_com_goal = Vec3(center.x(), center.y(), contact.center.z() + cfg.com_height);
  t.v_com_goal = cfg.v_ref * contact.tangent;

  t.p_swing_goal = contact.center;
  t.v_swing_goal = cfg.alpha * contact.tangent - (1.0 - cfg.alpha) * contact.normal;
  if (fsm.phase == Phase::SingleSupport) {
    const ContactPatch& support = footsteps[k + 1];
    t.v_takeoff = cfg.beta * support.tangent + (1.0 - cfg.beta) * support.normal;
  }
  return t;
}

FsmState fsm_step(const FsmState& state, const ReducedRobotState& robot,
                  const PreviewTargets& targets, const std::vector<ContactPatch>& footsteps,
                  const ControllerConfig& cfg) {
  FsmState next = state;
  const size_t k = size_t(state.step_index);
  if (state.phase == Phase::SingleSupport) {
    // SS(k) -> DS(k+1) at touchdown.
    if ((robot.p_swing - targets.p_swing_goal).norm() <= cfg.epsilon) {
      next.phase = Phase::DoubleSupport;
      next.step_index = state.step_index + 1;
      next.stance = {footsteps[k + 1], footsteps[k + 2]};
      next.next_footstep =
          (k + 3 < footsteps.size()) ? std::optional<ContactPatch>(footsteps[k + 3]) : std::nullopt;
    }
  } else if (!state.terminal(footsteps.size())) {
    // DS(k) -> SS(k) when the COM reaches the preview target vicinity.
    if ((robot.p_com - targets.p_com_goal).norm() <= cfg.d_trans) {
      next.phase = Phase::SingleSupport;
      next.stance = {footsteps[k + 1]};
      next.next_footstep = footsteps[k + 2];
    }
  }
  return next;
}

std::vector<ContactPatch> scaled_stance(const std::vector<ContactPatch>& patches,
                                        const ControllerConfig& cfg) {
  std::vector<ContactPatch> out = patches;
  for (ContactPatch& p : out) {
    p.half_length *= cfg.safety_scale;
    p.half_width *= cfg.safety_scale;
    p.friction *= cfg.safety_scale;
  }
  return out;
}

Controller::Controller(std::vector<ContactPatch> footsteps, ControllerConfig cfg, double mass,
                       Vec3 gravity)
    : footsteps_(std::move(footsteps)), cfg_(cfg), mass_(mass), gravity_(gravity) {
  if (!cfg_.valid()) throw std::invalid_argument("ControllerConfig: invalid values");
  for (const ContactPatch& p : footsteps_) require_valid(p);
  fsm_ = make_initial_fsm(footsteps_);
}

const Controller::StanceCache& Controller::cache_for(const FsmState& fsm) {
  if (cache_.step_index == fsm.step_index && cache_.phase == fsm.phase && cache_.step_index >= 0) {
    return cache_;
  }
  StanceCache c;
  c.step_index = fsm.step_index;
  c.phase = fsm.phase;
  c.targets = compute_preview_targets(footsteps_, fsm, cfg_, gravity_, mass_);
  const size_t k = size_t(fsm.step_index);
  if (fsm.phase == Phase::SingleSupport) {
    const std::vector<ContactPatch> support{footsteps_[k + 1]};
    const std::vector<ContactPatch> upcoming{footsteps_[k + 1], footsteps_[k + 2]};
    c.scaled_ss = geom::stance_wrench_cone(scaled_stance(support, cfg_), stance_origin(support));
    c.scaled_ds = geom::stance_wrench_cone(scaled_stance(upcoming, cfg_), stance_origin(upcoming));
    geom::PolygonResult sep =
        geom::static_equilibrium_polygon(scaled_stance(support, cfg_), mass_, gravity_, 1e-9);
    if (sep.status == geom::PolyStatus::Ok) c.support_sep = sep.polygon;
  } else {
    const std::vector<ContactPatch> support{footsteps_[k], footsteps_[k + 1]};
    c.scaled_ds = geom::stance_wrench_cone(scaled_stance(support, cfg_), stance_origin(support));
  }
  cache_ = std::move(c);
  return cache_;
}

PreviewTargets Controller::current_targets(const ReducedRobotState&) const {
  return compute_preview_targets(footsteps_, fsm_, cfg_, gravity_, mass_);
}

PlanResult Controller::plan_ss_preview(const ReducedRobotState& robot,
                                       const PreviewTargets& targets) {
  PlanResult out;
  const StanceCache& cache = cache_for(fsm_);
  topp::ConstraintOptions opt;
  opt.method = cfg_.reduction;

  // Stage 1: swing-foot preview under conservative workspace bounds,
  // landing at zero velocity. Inside the capture radius the foot is handed
  // to the touchdown regulator instead of ever-shorter retimed previews.
  const double swing_dist = (targets.p_swing_goal - robot.p_swing).norm();
  const bool swing_captured = swing_dist <= kSwingCaptureRadius;
  interp::PreviewPath swing_path;
  swing_path.status = interp::PreviewPath::Status::DegenerateBoundary;
  if (!swing_captured) {
    interp::BoundaryState swing_b;
    swing_b.p_cur = robot.p_swing;
    swing_b.v_cur = (robot.v_swing.norm() > 1e-6) ? robot.v_swing : targets.v_takeoff;
    swing_b.p_goal = targets.p_swing_goal;
    swing_b.v_goal = targets.v_swing_goal;
    swing_path = interp::interpolate_preview_path(swing_b);
  }

  // Flight-time estimate for the regulated landing (capture ring or a
  // non-retimable swing state): triangle/trapezoid profile over the
  // remaining distance under the workspace bounds.
  const auto flight_estimate = [this](double dist) {
    const double a_ws = cfg_.swing_accel_max / std::sqrt(3.0);
    const double v_peak = std::min(cfg_.swing_vel_max, std::sqrt(std::max(1e-9, dist * a_ws)));
    return 0.05 + dist / std::max(0.05, v_peak) + v_peak / a_ws;
  };

  double t_swing = flight_estimate(swing_dist);
  std::optional<topp::VelocityProfile> swing_profile;
  if (swing_path.status == interp::PreviewPath::Status::Ok) {
    topp::RetimeProblem swing_rp;
    swing_rp.path = swing_path.spline;
    swing_rp.constraints = topp::swing_workspace_constraints(swing_path.spline, cfg_.swing_accel_max,
                                                             cfg_.swing_vel_max, opt);
    swing_rp.sd_start = path_sd(robot.v_swing, swing_path.spline.velocity(0.0));
    swing_rp.sd_end_max = 0.0;  // touch down without impact
    swing_rp.ds = cfg_.ds;
    topp::RetimeResult swing_rt = topp::retime(swing_rp);
    if (swing_rt.ok()) {
      t_swing = swing_rt.profile.duration;
      swing_profile = std::move(swing_rt.profile);
    } else {
      // A swing state that cannot be retimed is landed by the touchdown
      // regulator instead; only the duration estimate enters the COM stage.
      TOPPMPC_LOG(2, "ss swing retime failed at s=" << swing_rt.infeasible_s
                                                    << ", regulating touchdown");
      swing_path.status = interp::PreviewPath::Status::DegenerateBoundary;
    }
  }

  // Stage 2: COM preview under the stance schedule, capped so that the COM
  // spends at least t_swing in the single-support section.
  interp::PreviewPath com_path = interp::interpolate_preview_path(
      com_boundary(robot, targets));
  if (com_path.status == interp::PreviewPath::Status::DegenerateBoundary) {
    // COM already at target: hold it and keep flying the foot.
    out.status = PlanStatus::Ok;
    out.plan.hold = true;
    out.plan.swing_path = swing_path.status == interp::PreviewPath::Status::Ok
                              ? std::optional<interp::PathSpline>(swing_path.spline)
                              : std::nullopt;
    out.plan.swing_profile = swing_profile;
    out.plan.t_swing = t_swing;
    return out;
  }

  const double s_max = com_path.spline.s_max();
  const double sd_start = path_sd(robot.v_com, com_path.spline.velocity(0.0));
  // Cone switch at the support-SEP exit: the quasi-static anchor for the
  // SS -> DS switch. The COM dwells over the stance foot while the swing
  // flies; the lateral corridor toward the new foothold is crossed after
  // touchdown, under the double-support cone.
  double s_trans = 0.5 * s_max;
  if (!cache.support_sep.degenerate && !cache.support_sep.vertices.empty()) {
    const topp::SepCrossings cross = topp::sep_crossings(com_path.spline, cache.support_sep);
    if (cross.status == topp::SepCrossings::Status::Ok && cross.s_second > 1e-9) {
      s_trans = cross.s_second;
    }
  }
  s_trans = std::min(s_trans, 0.98 * s_max);

  // The synchronization cap is positive only when the entry path velocity
  // stays below s_trans / T_swing. Hotter entries have no valid preview;
  // failing here drops the tick into the braking fallback. Once the foot
  // sits in the touchdown capture ring the cap degenerates and touchdown is
  // imminent anyway, so only retimed swings are synchronized.
  const bool synchronize = swing_profile.has_value();
  if (!synchronize) {
    // Touchdown in ~t_swing: past the index the COM reaches by then, the
    // double-support cone is the honest model.
    s_trans = std::min(s_trans, 1.2 * sd_start * t_swing + 0.02);
  }
  const double sddmax =
      synchronize ? topp::sddmax_for_swing(s_trans, t_swing, sd_start) : 0.0;
  if (synchronize && sddmax <= 1e-9) {
    TOPPMPC_LOG(2, "ss entry too hot: sd0=" << sd_start << " s_trans=" << s_trans
                                            << " T_swing=" << t_swing);
    out.infeasible_s = 0.0;
    return out;
  }

  topp::StanceSchedule schedule;
  schedule.intervals.push_back({0.0, s_trans, cache.scaled_ss});
  schedule.intervals.push_back({s_trans, s_max, cache.scaled_ds});

  topp::RetimeProblem com_rp;
  com_rp.path = com_path.spline;
  com_rp.constraints = topp::stance_constraints(com_path.spline, schedule, gravity_, opt);
  com_rp.sd_start = sd_start;
  const double end_tangent = com_path.spline.velocity(s_max).norm();
  com_rp.sd_end_max = (end_tangent > 1e-9) ? targets.v_com_goal.norm() / end_tangent
                                           : std::numeric_limits<double>::infinity();
  com_rp.ds = cfg_.ds;
  if (synchronize) {
    com_rp = topp::apply_sddmax(std::move(com_rp), sddmax, s_trans);
  }
  topp::RetimeResult com_rt = topp::retime(com_rp);
  if (!com_rt.ok()) {
    TOPPMPC_LOG(2, "ss com retime failed at s=" << com_rt.infeasible_s << " (sd0=" << sd_start
                                                << " s_trans=" << s_trans << " T_swing=" << t_swing
                                                << " sddmax=" << (com_rp.sdd_max ? *com_rp.sdd_max : 0.0)
                                                << " |delta|=" << com_path.spline.s_max() * 0.0 +
                                                       (targets.p_com_goal - robot.p_com).norm()
                                                << ")");
    out.infeasible_s = com_rt.infeasible_s;
    return out;
  }

  out.status = PlanStatus::Ok;
  out.plan.com_path = com_path.spline;
  out.plan.com_profile = std::move(com_rt.profile);
  out.plan.polygon_edges_mean = com_rt.polygon_edges_mean;
  if (swing_path.status == interp::PreviewPath::Status::Ok) {
    out.plan.swing_path = swing_path.spline;
    out.plan.swing_profile = swing_profile;
  }
  out.plan.t_swing = t_swing;
  out.plan.s_trans = s_trans;
  return out;
}

PlanResult Controller::plan_ds_preview(const ReducedRobotState& robot,
                                       const PreviewTargets& targets) {
  PlanResult out;
  const StanceCache& cache = cache_for(fsm_);
  topp::ConstraintOptions opt;
  opt.method = cfg_.reduction;

  // Close enough counts as arrived: previews shorter than the transition
  // radius degenerate numerically, and the ball is interior to the SEP.
  // The overdamped capture also cools the COM before the next handoff
  // (the ring must cover the braking distance from typical transfer speeds).
  if ((targets.p_com_goal - robot.p_com).norm() <= 1.5 * cfg_.d_trans) {
    out.status = PlanStatus::Ok;
    out.plan.hold = true;  // zero-length plan: capture the target
    return out;
  }
  interp::PreviewPath com_path = interp::interpolate_preview_path(
      com_boundary(robot, targets));
  if (com_path.status == interp::PreviewPath::Status::DegenerateBoundary) {
    out.status = PlanStatus::Ok;
    out.plan.hold = true;
    return out;
  }

  const double s_max = com_path.spline.s_max();

  // Hand the next single-support phase a workable entry: the swing
  // synchronization needs v_entry * T_swing below the distance to the
  // support-SEP boundary, so the transfer must end cold enough. Both sides
  // of the bound are in meters, independent of the tangent scaling.
  double end_speed = targets.v_com_goal.norm();
  const size_t k = size_t(fsm_.step_index);
  if (k + 2 < footsteps_.size()) {
    const double l_swing =
        1.25 * (footsteps_[k + 2].center - footsteps_[k].center).norm();
    const double a_ws = cfg_.swing_accel_max / std::sqrt(3.0);
    const double v_peak = std::min(cfg_.swing_vel_max, std::sqrt(std::max(1e-6, l_swing * a_ws)));
    const double t_sw = l_swing / v_peak + v_peak / a_ws;
    const double d_exit = cfg_.safety_scale * footsteps_[k + 1].half_length;
    end_speed = std::min(end_speed, 0.8 * d_exit / std::max(0.1, t_sw));
  }

  topp::RetimeProblem rp;
  rp.path = com_path.spline;
  // The cold terminal bound is enforced as a velocity row over the whole
  // approach stretch, not just at the last grid point; the optimal profile
  // then brakes ahead of the handoff instead of at it.
  {
    const interp::PathSpline path = com_path.spline;
    const topp::StanceSchedule schedule = topp::StanceSchedule::single(cache.scaled_ds, s_max);
    const Vec3 gravity = gravity_;
    // Cover the final capture radii of the transfer in physical length, but
    // keep the first stretch free so the current speed is never forbidden.
    const double delta_len = (targets.p_com_goal - robot.p_com).norm();
    const double approach_from =
        s_max * std::clamp(1.0 - 3.0 * cfg_.d_trans / std::max(1e-6, delta_len), 0.3, 0.7);
    const double v_cold = end_speed;
    rp.constraints = [path, schedule, gravity, opt, approach_from, v_cold](int, double s) {
      topp::HalfplaneSet rows = topp::topp_halfplanes_at(path, s, schedule.cone_at(s), gravity);
      if (s >= approach_from) {
        const double tangent2 = path.velocity(s).squaredNorm();
        if (tangent2 > 1e-12) rows.append(Vec2(0.0, tangent2), v_cold * v_cold);
      }
      return topp::reduce_constraint_set(rows, s, opt);
    };
  }
  rp.sd_start = path_sd(robot.v_com, com_path.spline.velocity(0.0));
  const double end_tangent = com_path.spline.velocity(s_max).norm();
  rp.sd_end_max = (end_tangent > 1e-9) ? end_speed / end_tangent
                                       : std::numeric_limits<double>::infinity();
  rp.ds = cfg_.ds;
  topp::RetimeResult rt = topp::retime(rp);
  if (!rt.ok()) {
    TOPPMPC_LOG(2, "ds retime failed at s=" << rt.infeasible_s << " (sd0=" << rp.sd_start
                                            << " end=" << end_speed
                                            << " |delta|=" << (targets.p_com_goal - robot.p_com).norm()
                                            << " lambda=" << com_path.lambda << ")");
    out.infeasible_s = rt.infeasible_s;
    return out;
  }
  out.status = PlanStatus::Ok;
  out.plan.com_path = com_path.spline;
  out.plan.com_profile = std::move(rt.profile);
  out.plan.polygon_edges_mean = rt.polygon_edges_mean;
  return out;
}

TickCommands Controller::tick(const ReducedRobotState& robot) {
  const auto t0 = std::chrono::steady_clock::now();

  PreviewTargets targets = cache_for(fsm_).targets;
  const FsmState stepped = fsm_step(fsm_, robot, targets, footsteps_, cfg_);
  if (stepped.phase != fsm_.phase || stepped.step_index != fsm_.step_index) {
    fsm_ = stepped;
    targets = cache_for(fsm_).targets;
  }

  PlanResult planned = (fsm_.phase == Phase::SingleSupport) ? plan_ss_preview(robot, targets)
                                                            : plan_ds_preview(robot, targets);

  TickCommands cmd;
  cmd.phase = fsm_.phase;
  cmd.step_index = fsm_.step_index;

  if (planned.status == PlanStatus::Ok) {
    consecutive_failures_ = 0;
    cmd.status = TickStatus::Ok;
    cmd.plan = planned.plan;
    if (planned.plan.hold) {
      cmd.a_com = endgame_acceleration(robot, targets.p_com_goal);
    } else {
      cmd.a_com = initial_acceleration(planned.plan.com_path, planned.plan.com_profile);
    }
    if (planned.plan.swing_path && planned.plan.swing_profile) {
      cmd.a_swing = initial_acceleration(*planned.plan.swing_path, *planned.plan.swing_profile);
    } else if (fsm_.phase == Phase::SingleSupport) {
      cmd.a_swing = swing_capture_acceleration(robot, targets.p_swing_goal,
                                               fsm_.next_footstep->normal, cfg_.swing_accel_max,
                                               cfg_.epsilon);
    }
  } else {
    ++consecutive_failures_;
    TOPPMPC_LOG(1, "planner failure " << consecutive_failures_ << " at s=" << planned.infeasible_s);
    if (consecutive_failures_ >= cfg_.max_retries) {
      cmd.status = TickStatus::PlannerFailed;
    } else {
      // Degraded mode: keep flying the previous plan open-loop, advanced by
      // the elapsed time, and retry next tick.
      cmd.status = TickStatus::DegradedHold;
      const bool same_phase_plan = has_plan_ && held_phase_ == fsm_.phase &&
                                   held_step_ == fsm_.step_index && !held_plan_.hold &&
                                   held_plan_.com_profile.s.size() > 1;
      if (fsm_.phase == Phase::SingleSupport) {
        if (same_phase_plan) {
          // Keep flying the last good preview of this phase.
          plan_age_ += cfg_.period;
          cmd.plan = held_plan_;
          cmd.a_com = acceleration_along(held_plan_.com_path, held_plan_.com_profile, plan_age_);
        } else {
          // No usable preview yet: the entry was too hot, brake in place,
          // the support is right below.
          cmd.a_com = braking_acceleration(robot);
        }
        if (same_phase_plan && held_plan_.swing_path && held_plan_.swing_profile) {
          cmd.a_swing =
              acceleration_along(*held_plan_.swing_path, *held_plan_.swing_profile, plan_age_);
        } else {
          cmd.a_swing = swing_capture_acceleration(robot, targets.p_swing_goal,
                                                   fsm_.next_footstep->normal,
                                                   cfg_.swing_accel_max, cfg_.epsilon);
        }
      } else if (same_phase_plan) {
        plan_age_ += cfg_.period;
        cmd.plan = held_plan_;
        cmd.a_com = acceleration_along(held_plan_.com_path, held_plan_.com_profile, plan_age_);
      } else {
        cmd.a_com = endgame_acceleration(robot, targets.p_com_goal);
      }
    }
  }

  if (planned.status == PlanStatus::Ok) {
    held_plan_ = planned.plan;
    held_phase_ = fsm_.phase;
    held_step_ = fsm_.step_index;
    plan_age_ = 0.0;
    has_plan_ = true;
  }

  cmd.planning_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  last_commands_ = cmd;
  has_last_ = true;
  return cmd;
}

}  // namespace toppmpc::loco
