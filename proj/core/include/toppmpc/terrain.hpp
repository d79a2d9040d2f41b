// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "toppmpc/types.hpp"

namespace toppmpc::sim {

struct HillProfile {
  double amplitude = 1.0;     // A [m]; height(x) = A sin(2 pi x / wavelength)
  double wavelength = 12.0;   // [m]
  double lateral_width = 0.19;  // left/right foot spacing [m]
  double step_length = 0.25;  // [m]
  int num_steps = 12;
  double foot_half_length = 0.112;
  double foot_half_width = 0.065;
  double friction = 0.7;

  double height(double x) const;
  double slope(double x) const;  // dh/dx
  double max_slope_deg() const;
};

struct SlopeExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Terrain is either an explicit foothold list or a procedural hill profile.
struct Terrain {
  std::vector<ContactPatch> footholds;  // empty when procedural
  std::optional<HillProfile> hills;
};

/// Alternating left/right footholds laid on the hill surface, tangent along
/// the walking direction. Deterministic for a given seed. Throws
/// SlopeExceededError when the profile implies slopes above 30 degrees.
std::vector<ContactPatch> generate_hills_footsteps(const HillProfile& profile, uint64_t seed);

std::vector<ContactPatch> terrain_footsteps(const Terrain& terrain, uint64_t seed);

}  // namespace toppmpc::sim
