// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/wrench_cone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "toppmpc/lp.hpp"

namespace toppmpc::geom {

namespace {

// Local-frame facet rows (f, tau about the patch center). The friction
// pyramid uses mu directly on each tangential axis, which is exactly the
// dual of the 4-edge span below.
Eigen::Matrix<double, 16, 6> local_facets(double x, double y, double mu) {
  Eigen::Matrix<double, 16, 6> u;
  u.setZero();
  int r = 0;
  for (double s : {1.0, -1.0}) {  // |f_x| <= mu f_z
    u.row(r) << s, 0, -mu, 0, 0, 0;
    ++r;
  }
  for (double s : {1.0, -1.0}) {  // |f_y| <= mu f_z
    u.row(r) << 0, s, -mu, 0, 0, 0;
    ++r;
  }
  for (double s : {1.0, -1.0}) {  // |tau_x| <= Y f_z
    u.row(r) << 0, 0, -y, s, 0, 0;
    ++r;
  }
  for (double s : {1.0, -1.0}) {  // |tau_y| <= X f_z
    u.row(r) << 0, 0, -x, 0, s, 0;
    ++r;
  }
  // tau_z <= tau_z_max and tau_z >= tau_z_min, absolute values expanded
  for (double s1 : {1.0, -1.0}) {
    for (double s2 : {1.0, -1.0}) {
      u.row(r) << s1 * y, s2 * x, -mu * (x + y), s1 * mu, s2 * mu, 1.0;
      ++r;
      u.row(r) << s1 * y, s2 * x, -mu * (x + y), -s1 * mu, -s2 * mu, -1.0;
      ++r;
    }
  }
  return u;
}

uint64_t popcount64(uint64_t v) { return uint64_t(__builtin_popcountll(v)); }

}  // namespace

WrenchConeMatrix rect_contact_wrench_cone(const ContactPatch& patch, const Vec3& origin) {
  require_valid(patch);
  const Mat3 R = patch.rotation();
  const Vec3 p = patch.center - origin;
  const Eigen::Matrix<double, 16, 6> u =
      local_facets(patch.half_length, patch.half_width, patch.friction);

  WrenchConeMatrix cone;
  cone.origin = origin;
  cone.rows.resize(16, 6);
  for (int i = 0; i < 16; ++i) {
    const Vec3 uf = u.row(i).head<3>();
    const Vec3 ut = u.row(i).tail<3>();
    const Vec3 af = R * uf + p.cross(R * ut);
    const Vec3 at = R * ut;
    cone.rows.row(i).head<3>() = af.transpose();
    cone.rows.row(i).tail<3>() = at.transpose();
    cone.rows.row(i).normalize();
  }
  return cone;
}

Eigen::MatrixXd cone_span_rays(const ContactPatch& patch, const Vec3& origin) {
  require_valid(patch);
  const Mat3 R = patch.rotation();
  const double mu = patch.friction;
  Eigen::MatrixXd rays(16, 6);
  int r = 0;
  for (const Vec3& corner : patch.corners()) {
    const Vec3 lever = corner - origin;
    for (double s1 : {1.0, -1.0}) {
      for (double s2 : {1.0, -1.0}) {
        const Vec3 f = R * Vec3(s1 * mu, s2 * mu, 1.0);
        rays.row(r).head<3>() = f.transpose();
        rays.row(r).tail<3>() = lever.cross(f).transpose();
        rays.row(r).normalize();
        ++r;
      }
    }
  }
  return rays;
}

Eigen::MatrixXd cone_facets_from_rays(const Eigen::MatrixXd& rays, double tol) {
  const int n = int(rays.rows());
  if (n > 64) throw std::invalid_argument("cone_facets_from_rays: more than 64 generators");
  Eigen::MatrixXd r = rays;
  for (int i = 0; i < n; ++i) r.row(i).normalize();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(r.transpose());
  qr.setThreshold(tol);
  if (qr.rank() < 6) throw DegenerateConeError("generators do not span a solid 6D cone");

  // Initial basis: 6 independent generators; the polar of {a : M a <= 0}
  // is spanned by the columns of -inv(M).
  std::vector<int> order;
  const auto perm = qr.colsPermutation().indices();
  for (int i = 0; i < 6; ++i) order.push_back(perm[i]);
  std::vector<bool> used(size_t(n), false);
  for (int i : order) used[size_t(i)] = true;
  for (int i = 0; i < n; ++i) {
    if (!used[size_t(i)]) order.push_back(i);
  }

  Eigen::Matrix<double, 6, 6> m;
  for (int i = 0; i < 6; ++i) m.row(i) = r.row(order[size_t(i)]);
  const Eigen::Matrix<double, 6, 6> minv = m.inverse();

  struct PolarRay {
    Wrench a;
    uint64_t tight = 0;  // bitmask over processed constraints
  };
  std::vector<PolarRay> cur;
  for (int j = 0; j < 6; ++j) {
    PolarRay pr;
    pr.a = -minv.col(j).normalized();
    for (int i = 0; i < 6; ++i) {
      if (i != j) pr.tight |= (uint64_t(1) << i);
    }
    cur.push_back(pr);
  }

  auto dedupe = [&]() {
    std::vector<PolarRay> out;
    for (const PolarRay& pr : cur) {
      bool dup = false;
      for (PolarRay& q : out) {
        if ((pr.a - q.a).norm() < 1e-9) {
          q.tight |= pr.tight;
          dup = true;
          break;
        }
      }
      if (!dup) out.push_back(pr);
    }
    cur = std::move(out);
  };

  for (size_t ci = 6; ci < order.size(); ++ci) {
    const Wrench g = r.row(order[ci]).transpose();
    const uint64_t bit = uint64_t(1) << ci;
    std::vector<int> pos, neg, zero;
    std::vector<double> val(cur.size());
    for (size_t i = 0; i < cur.size(); ++i) {
      val[i] = cur[i].a.dot(g);
      if (val[i] > tol) {
        pos.push_back(int(i));
      } else if (val[i] < -tol) {
        neg.push_back(int(i));
      } else {
        zero.push_back(int(i));
      }
    }
    if (pos.empty()) {
      for (int i : zero) cur[size_t(i)].tight |= bit;
      continue;
    }
    std::vector<PolarRay> next;
    for (int i : neg) next.push_back(cur[size_t(i)]);
    for (int i : zero) {
      PolarRay pr = cur[size_t(i)];
      pr.tight |= bit;
      next.push_back(pr);
    }
    for (int ip : pos) {
      for (int in : neg) {
        const uint64_t common = cur[size_t(ip)].tight & cur[size_t(in)].tight;
        if (popcount64(common) < 4) continue;  // need rank d-2 worth of tight constraints
        bool adjacent = true;
        for (size_t k = 0; k < cur.size(); ++k) {
          if (int(k) == ip || int(k) == in) continue;
          if ((common & ~cur[k].tight) == 0) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        PolarRay pr;
        pr.a = (val[size_t(ip)] * cur[size_t(in)].a - val[size_t(in)] * cur[size_t(ip)].a).normalized();
        pr.tight = common | bit;
        next.push_back(pr);
      }
    }
    cur = std::move(next);
    dedupe();
    if (cur.empty()) throw DegenerateConeError("polar cone collapsed: generators span a halfspace");
  }

  Eigen::MatrixXd facets(int(cur.size()), 6);
  for (size_t i = 0; i < cur.size(); ++i) facets.row(int(i)) = cur[i].a.transpose();
  // Deterministic row order.
  std::vector<int> idx(cur.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = int(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    for (int k = 0; k < 6; ++k) {
      if (facets(a, k) != facets(b, k)) return facets(a, k) < facets(b, k);
    }
    return false;
  });
  Eigen::MatrixXd sorted(facets.rows(), 6);
  for (size_t i = 0; i < idx.size(); ++i) sorted.row(int(i)) = facets.row(idx[i]);
  return sorted;
}

WrenchConeMatrix stance_wrench_cone(const std::vector<ContactPatch>& patches, const Vec3& origin) {
  if (patches.empty() || patches.size() > 2) {
    throw std::invalid_argument("stance_wrench_cone: expected 1 or 2 patches");
  }
  Eigen::MatrixXd rays(16 * int(patches.size()), 6);
  int at = 0;
  for (const ContactPatch& p : patches) {
    rays.middleRows(at, 16) = cone_span_rays(p, origin);
    at += 16;
  }
  WrenchConeMatrix cone;
  cone.origin = origin;
  cone.rows = cone_facets_from_rays(rays);
  return cone;
}

std::optional<ContactForces> feasible_contact_forces(const std::vector<ContactPatch>& patches,
                                                     const Wrench& w, const Vec3& origin) {
  if (patches.empty() || patches.size() > 2) {
    throw std::invalid_argument("feasible_contact_forces: expected 1 or 2 patches");
  }
  // Pyramid edge parameterization: every corner force is a nonnegative
  // combination of its 4 edges, so the feasibility problem is a standard
  // form LP in the edge weights (the weight equals the edge's normal force).
  const int nvar = 16 * int(patches.size());
  Eigen::MatrixXd a_eq(6, nvar);
  std::vector<Vec3> edge_dirs(static_cast<size_t>(nvar), Vec3::Zero());
  std::vector<int> corner_of(static_cast<size_t>(nvar), 0);
  int col = 0;
  int corner_index = 0;
  for (const ContactPatch& patch : patches) {
    require_valid(patch);
    const Mat3 R = patch.rotation();
    const double mu = patch.friction;
    for (const Vec3& corner : patch.corners()) {
      const Vec3 lever = corner - origin;
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
          const Vec3 e = R * Vec3(s1 * mu, s2 * mu, 1.0);
          a_eq.col(col).head<3>() = e;
          a_eq.col(col).tail<3>() = lever.cross(e);
          edge_dirs[size_t(col)] = e;
          corner_of[size_t(col)] = corner_index;
          ++col;
        }
      }
      ++corner_index;
    }
  }
  const Eigen::VectorXd cost = Eigen::VectorXd::Ones(nvar);  // min total normal force
  LpResult lp = solve_lp(cost, a_eq, w, Eigen::MatrixXd(0, nvar), Eigen::VectorXd(0));
  if (lp.status != LpStatus::Optimal) return std::nullopt;

  ContactForces out;
  out.forces.assign(size_t(4 * patches.size()), Vec3::Zero());
  for (int j = 0; j < nvar; ++j) {
    out.forces[size_t(corner_of[size_t(j)])] += lp.x(j) * edge_dirs[size_t(j)];
  }
  out.normal_sum = lp.x.sum();
  return out;
}

Wrench gravito_inertial_wrench(double mass, const Vec3& com, const Vec3& com_accel,
                               const Vec3& gravity, const Vec3& origin) {
  Wrench w;
  const Vec3 f = mass * (com_accel - gravity);
  w.head<3>() = f;
  w.tail<3>() = (com - origin).cross(f);
  return w;
}

}  // namespace toppmpc::geom
