// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "toppmpc/polygon.hpp"
#include "toppmpc/wrench_cone.hpp"

namespace toppmpc::geom {

/// Horizontal cross-section of the static-equilibrium prism: COM positions
/// over which the stance can support the pure-gravity wrench. Computed by
/// recursive projection with the contact-force feasibility LP as support
/// oracle; z-independent for vertical gravity (hence a prism).
PolygonResult static_equilibrium_polygon(const std::vector<ContactPatch>& patches, double mass,
                                         const Vec3& gravity, double tol = 1e-6);

}  // namespace toppmpc::geom
