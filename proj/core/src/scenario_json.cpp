// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/scenario_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace toppmpc::io {

using nlohmann::json;

namespace {

Vec3 vec3_from(const json& j, const char* key, const Vec3& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3) throw ScenarioParseError(std::string(key) + ": expected [x, y, z]");
  return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

json vec3_to(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ContactPatch patch_from(const json& j) {
  const Vec3 center = vec3_from(j, "center", Vec3::Zero());
  const Vec3 normal = vec3_from(j, "normal", Vec3::UnitZ());
  const Vec3 heading = vec3_from(j, "heading", Vec3::UnitX());
  double half_length = 0.112, half_width = 0.065, friction = 0.7;
  maybe(j, "half_length", half_length);
  maybe(j, "half_width", half_width);
  maybe(j, "friction", friction);
  return make_patch(center, normal, heading, half_length, half_width, friction);
}

json patch_to(const ContactPatch& p) {
  json j;
  j["center"] = vec3_to(p.center);
  j["normal"] = vec3_to(p.normal);
  j["heading"] = vec3_to(p.tangent);
  j["half_length"] = p.half_length;
  j["half_width"] = p.half_width;
  j["friction"] = p.friction;
  return j;
}

}  // namespace

sim::Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError(e.what());
  }
  try {
    sim::Scenario sc;
    maybe(j, "name", sc.name);
    maybe(j, "mass", sc.mass);
    sc.gravity = vec3_from(j, "gravity", sc.gravity);
    maybe(j, "max_time", sc.max_time);
    maybe(j, "seed", sc.seed);

    if (!j.contains("terrain")) throw ScenarioParseError("missing terrain block");
    const json& t = j.at("terrain");
    const std::string type = t.value("type", "hills");
    if (type == "hills") {
      sim::HillProfile hp;
      maybe(t, "amplitude", hp.amplitude);
      maybe(t, "wavelength", hp.wavelength);
      maybe(t, "lateral_width", hp.lateral_width);
      maybe(t, "step_length", hp.step_length);
      maybe(t, "num_steps", hp.num_steps);
      maybe(t, "foot_half_length", hp.foot_half_length);
      maybe(t, "foot_half_width", hp.foot_half_width);
      maybe(t, "friction", hp.friction);
      sc.terrain.hills = hp;
    } else if (type == "footholds") {
      if (!t.contains("patches") || !t.at("patches").is_array()) {
        throw ScenarioParseError("footholds terrain requires a patches array");
      }
      for (const json& pj : t.at("patches")) sc.terrain.footholds.push_back(patch_from(pj));
    } else {
      throw ScenarioParseError("unknown terrain type: " + type);
    }

    if (j.contains("config")) {
      const json& c = j.at("config");
      maybe(c, "epsilon", sc.config.epsilon);
      maybe(c, "d_trans", sc.config.d_trans);
      maybe(c, "v_ref", sc.config.v_ref);
      maybe(c, "alpha", sc.config.alpha);
      maybe(c, "beta", sc.config.beta);
      maybe(c, "safety_scale", sc.config.safety_scale);
      maybe(c, "ds", sc.config.ds);
      maybe(c, "period", sc.config.period);
      maybe(c, "swing_accel_max", sc.config.swing_accel_max);
      maybe(c, "swing_vel_max", sc.config.swing_vel_max);
      maybe(c, "com_height", sc.config.com_height);
      maybe(c, "max_retries", sc.config.max_retries);
      if (c.contains("method")) {
        const std::string m = c.at("method").get<std::string>();
        if (m == "hull") sc.config.reduction = loco::ReductionMethod::DualHull;
        else if (m == "bl") sc.config.reduction = loco::ReductionMethod::BretlLall;
        else throw ScenarioParseError("config.method must be 'hull' or 'bl'");
      }
    }

    if (j.contains("initial")) {
      const json& s = j.at("initial");
      sim::ReducedRobotState st;
      st.p_com = vec3_from(s, "p_com", Vec3::Zero());
      st.v_com = vec3_from(s, "v_com", Vec3::Zero());
      st.p_swing = vec3_from(s, "p_swing", Vec3::Zero());
      st.v_swing = vec3_from(s, "v_swing", Vec3::Zero());
      sc.initial_state = st;
    }
    return sc;
  } catch (const json::exception& e) {
    throw ScenarioParseError(e.what());
  }
}

sim::Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

std::string scenario_to_json(const sim::Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["mass"] = sc.mass;
  j["gravity"] = vec3_to(sc.gravity);
  j["max_time"] = sc.max_time;
  j["seed"] = sc.seed;
  if (sc.terrain.hills && sc.terrain.footholds.empty()) {
    const sim::HillProfile& hp = *sc.terrain.hills;
    j["terrain"] = {{"type", "hills"},
                    {"amplitude", hp.amplitude},
                    {"wavelength", hp.wavelength},
                    {"lateral_width", hp.lateral_width},
                    {"step_length", hp.step_length},
                    {"num_steps", hp.num_steps},
                    {"foot_half_length", hp.foot_half_length},
                    {"foot_half_width", hp.foot_half_width},
                    {"friction", hp.friction}};
  } else {
    json patches = json::array();
    for (const ContactPatch& p : sc.terrain.footholds) patches.push_back(patch_to(p));
    j["terrain"] = {{"type", "footholds"}, {"patches", patches}};
  }
  j["config"] = {{"epsilon", sc.config.epsilon},
                 {"d_trans", sc.config.d_trans},
                 {"v_ref", sc.config.v_ref},
                 {"alpha", sc.config.alpha},
                 {"beta", sc.config.beta},
                 {"safety_scale", sc.config.safety_scale},
                 {"ds", sc.config.ds},
                 {"period", sc.config.period},
                 {"swing_accel_max", sc.config.swing_accel_max},
                 {"swing_vel_max", sc.config.swing_vel_max},
                 {"com_height", sc.config.com_height},
                 {"max_retries", sc.config.max_retries},
                 {"method", sc.config.reduction == loco::ReductionMethod::DualHull ? "hull" : "bl"}};
  if (sc.initial_state) {
    j["initial"] = {{"p_com", vec3_to(sc.initial_state->p_com)},
                    {"v_com", vec3_to(sc.initial_state->v_com)},
                    {"p_swing", vec3_to(sc.initial_state->p_swing)},
                    {"v_swing", vec3_to(sc.initial_state->v_swing)}};
  }
  return j.dump(2);
}

std::string tick_record_json(const sim::TickRecord& t) {
  json j;
  j["t"] = t.time;
  j["phase"] = t.phase == sim::Phase::DoubleSupport ? "DS" : "SS";
  j["step"] = t.step_index;
  j["status"] = t.status == loco::TickStatus::Ok
                    ? "ok"
                    : (t.status == loco::TickStatus::DegradedHold ? "hold" : "failed");
  j["a_com"] = vec3_to(t.a_com);
  if (t.a_swing) j["a_swing"] = vec3_to(*t.a_swing);
  j["s_trans"] = t.s_trans;
  j["t_swing"] = t.t_swing;
  j["profile_duration"] = t.profile_duration;
  j["polygon_edges_mean"] = t.polygon_edges_mean;
  j["planning_ms"] = t.planning_seconds * 1e3;
  j["audit_feasible"] = t.audit_feasible;
  j["audit_max_facet"] = t.audit_max_facet;
  j["p_com"] = vec3_to(t.p_com);
  j["p_swing"] = vec3_to(t.p_swing);
  return j.dump();
}

}  // namespace toppmpc::io
