// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/terrain.hpp"

#include <cmath>

namespace toppmpc::sim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMaxSlopeDeg = 30.0;
}  // namespace

double HillProfile::height(double x) const {
  return amplitude * std::sin(2.0 * kPi * x / wavelength);
}

double HillProfile::slope(double x) const {
  return amplitude * (2.0 * kPi / wavelength) * std::cos(2.0 * kPi * x / wavelength);
}

double HillProfile::max_slope_deg() const {
  return std::atan(std::abs(amplitude) * 2.0 * kPi / wavelength) * 180.0 / kPi;
}

std::vector<ContactPatch> generate_hills_footsteps(const HillProfile& profile, uint64_t seed) {
  if (profile.wavelength <= 0.0 || profile.step_length <= 0.0 || profile.num_steps < 2) {
    throw std::invalid_argument("generate_hills_footsteps: bad profile parameters");
  }
  if (profile.max_slope_deg() > kMaxSlopeDeg + 0.5) {
    throw SlopeExceededError("hill profile exceeds the 30 degree slope budget");
  }
  (void)seed;  // reserved for foothold jitter; the nominal layout is deterministic

  std::vector<ContactPatch> steps;
  steps.reserve(size_t(profile.num_steps));
  for (int i = 0; i < profile.num_steps; ++i) {
    const double x = i * profile.step_length;
    const double y = (i % 2 == 0) ? -0.5 * profile.lateral_width : 0.5 * profile.lateral_width;
    const double g = profile.slope(x);
    const Vec3 center(x, y, profile.height(x));
    const Vec3 normal = Vec3(-g, 0.0, 1.0).normalized();
    steps.push_back(make_patch(center, normal, Vec3::UnitX(), profile.foot_half_length,
                               profile.foot_half_width, profile.friction));
  }
  return steps;
}

std::vector<ContactPatch> terrain_footsteps(const Terrain& terrain, uint64_t seed) {
  if (!terrain.footholds.empty()) return terrain.footholds;
  if (!terrain.hills) throw std::invalid_argument("terrain has neither footholds nor a hill profile");
  return generate_hills_footsteps(*terrain.hills, seed);
}

}  // namespace toppmpc::sim
