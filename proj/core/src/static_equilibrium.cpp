// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/static_equilibrium.hpp"

#include "toppmpc/lp.hpp"

namespace toppmpc::geom {

PolygonResult static_equilibrium_polygon(const std::vector<ContactPatch>& patches, double mass,
                                         const Vec3& gravity, double tol) {
  if (patches.empty() || patches.size() > 2) {
    throw std::invalid_argument("static_equilibrium_polygon: expected 1 or 2 patches");
  }
  if (!(mass > 0.0)) throw std::invalid_argument("static_equilibrium_polygon: mass must be positive");

  // Variables: edge weights alpha >= 0 plus the free COM coordinates (x, y),
  // split into positive parts. Force balance: sum alpha e = -m g. Torque at
  // the world origin with the COM at (x, y, 0): sum alpha (c x e) = m (g x p).
  const int n_edges = 16 * int(patches.size());
  const int nvar = n_edges + 4;  // alpha..., x+, x-, y+, y-
  Eigen::MatrixXd a_eq(6, nvar);
  a_eq.setZero();
  int col = 0;
  for (const ContactPatch& patch : patches) {
    require_valid(patch);
    const Mat3 r = patch.rotation();
    const double mu = patch.friction;
    for (const Vec3& corner : patch.corners()) {
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
          const Vec3 e = r * Vec3(s1 * mu, s2 * mu, 1.0);
          a_eq.col(col).head<3>() = e;
          a_eq.col(col).tail<3>() = corner.cross(e);
          ++col;
        }
      }
    }
  }
  const Vec3 gx = gravity.cross(Vec3::UnitX());  // d(g x p)/dx with p = (x, y, 0)
  const Vec3 gy = gravity.cross(Vec3::UnitY());
  a_eq.col(n_edges + 0).tail<3>() = -mass * gx;
  a_eq.col(n_edges + 1).tail<3>() = mass * gx;
  a_eq.col(n_edges + 2).tail<3>() = -mass * gy;
  a_eq.col(n_edges + 3).tail<3>() = mass * gy;

  Eigen::VectorXd b_eq(6);
  b_eq.head<3>() = -mass * gravity;
  b_eq.tail<3>().setZero();

  SupportOracle oracle = [&](const Vec2& dir) -> std::optional<Vec2> {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(nvar);
    c(n_edges + 0) = -dir.x();
    c(n_edges + 1) = dir.x();
    c(n_edges + 2) = -dir.y();
    c(n_edges + 3) = dir.y();
    LpResult lp = solve_lp(c, a_eq, b_eq, Eigen::MatrixXd(0, nvar), Eigen::VectorXd(0));
    if (lp.status != LpStatus::Optimal) return std::nullopt;
    return Vec2(lp.x(n_edges) - lp.x(n_edges + 1), lp.x(n_edges + 2) - lp.x(n_edges + 3));
  };

  return bretl_lall_projection(oracle, tol);
}

}  // namespace toppmpc::geom
