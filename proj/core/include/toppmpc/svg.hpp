// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "toppmpc/polygon.hpp"
#include "toppmpc/simulation.hpp"

namespace toppmpc::io {

/// Side view (x-z) of a run: terrain line, footstep patches, COM and swing
/// traces. Self-contained hand-rolled SVG, no plotting dependency.
std::string trajectory_svg(const sim::SimLog& log, const std::vector<ContactPatch>& footsteps);

struct PolygonSnapshot {
  double s = 0.0;
  geom::Polygon2 polygon;
  bool origin_feasible = false;
};

/// Constraint polygons in the (sdd, sd2)-plane, one panel per snapshot,
/// with the origin marked by a red dot.
std::string polygons_svg(const std::vector<PolygonSnapshot>& snaps);

}  // namespace toppmpc::io
