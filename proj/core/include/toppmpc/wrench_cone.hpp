// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "toppmpc/types.hpp"

namespace toppmpc::geom {

/// Facet form A_O of a net contact wrench cone: feasible wrenches taken at
/// `origin` satisfy rows * w <= 0.
struct WrenchConeMatrix {
  Eigen::MatrixXd rows;  // F x 6, unit-norm facet normals in wrench space
  Vec3 origin = Vec3::Zero();

  int facet_count() const { return int(rows.rows()); }
  double max_facet_value(const Wrench& w) const { return (rows * w).maxCoeff(); }
  bool admits(const Wrench& w, double tol = 1e-9) const { return max_facet_value(w) <= tol; }
};

struct DegenerateConeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed-form 16-facet wrench cone of one rectangular patch: 4 friction
/// pyramid facets, 4 center-of-pressure facets and 8 yaw-torque facets,
/// expressed in the world frame about `origin`.
WrenchConeMatrix rect_contact_wrench_cone(const ContactPatch& patch, const Vec3& origin);

/// Span form of the same cone: 16 generator rays (4 corners x 4 friction
/// pyramid edges), rows of the returned matrix.
Eigen::MatrixXd cone_span_rays(const ContactPatch& patch, const Vec3& origin);

/// Facet enumeration of cone{rays}: double-description run on the polar
/// cone. Throws DegenerateConeError when the rays do not span a solid 6D
/// cone. Rows come back unit-norm, deduplicated, lexicographically sorted.
Eigen::MatrixXd cone_facets_from_rays(const Eigen::MatrixXd& rays, double tol = 1e-9);

/// Net wrench cone of a one- or two-patch stance (Minkowski sum of the
/// per-patch cones), by facet enumeration over all generator rays.
WrenchConeMatrix stance_wrench_cone(const std::vector<ContactPatch>& patches, const Vec3& origin);

/// One feasible decomposition of a net wrench into corner friction-pyramid
/// forces, minimizing the summed normal force. Forces are listed per patch
/// in ContactPatch::corners() order. nullopt when the wrench is infeasible.
struct ContactForces {
  std::vector<Vec3> forces;  // 4 per patch, world frame
  double normal_sum = 0.0;
};
std::optional<ContactForces> feasible_contact_forces(const std::vector<ContactPatch>& patches,
                                                     const Wrench& w, const Vec3& origin);

/// Newton-Euler wrench at `origin` for a point mass under constant angular
/// momentum: [m (a - g); m (p - origin) x (a - g)].
Wrench gravito_inertial_wrench(double mass, const Vec3& com, const Vec3& com_accel,
                               const Vec3& gravity, const Vec3& origin);

}  // namespace toppmpc::geom
