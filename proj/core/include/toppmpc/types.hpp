// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <vector>

namespace toppmpc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Wrench = Eigen::Matrix<double, 6, 1>;  // [force; torque about a reference point]

/// A rectangular surface contact: pose, half-extents and friction.
/// The frame columns (t, b, n) are tangent / binormal / normal unit
/// vectors; t spans the half_length direction, b the half_width one.
struct ContactPatch {
  Vec3 center = Vec3::Zero();
  Vec3 tangent = Vec3::UnitX();
  Vec3 binormal = Vec3::UnitY();
  Vec3 normal = Vec3::UnitZ();
  double half_length = 0.112;  // X, along tangent [m]
  double half_width = 0.065;   // Y, along binormal [m]
  double friction = 0.7;

  Mat3 rotation() const {
    Mat3 R;
    R.col(0) = tangent;
    R.col(1) = binormal;
    R.col(2) = normal;
    return R;
  }

  /// World positions of the four sole corners.
  std::array<Vec3, 4> corners() const {
    const Vec3 dx = half_length * tangent;
    const Vec3 dy = half_width * binormal;
    return {center + dx + dy, center - dx + dy, center - dx - dy, center + dx - dy};
  }

  bool valid(double tol = 1e-9) const {
    if (!(half_length > 0.0 && half_width > 0.0 && friction > 0.0)) return false;
    const Mat3 R = rotation();
    if ((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
    return R.determinant() > 0.0;  // right-handed
  }
};

inline void require_valid(const ContactPatch& patch) {
  if (!patch.valid()) throw std::invalid_argument("ContactPatch: frame not right-handed orthonormal or non-positive extents");
}

/// Contact patch whose frame is derived from a normal and a walking direction
/// (heading is projected onto the surface to form the tangent).
inline ContactPatch make_patch(const Vec3& center, const Vec3& normal_dir, const Vec3& heading,
                               double half_length, double half_width, double friction) {
  ContactPatch p;
  p.center = center;
  p.normal = normal_dir.normalized();
  const Vec3 t = heading - heading.dot(p.normal) * p.normal;
  if (t.norm() < 1e-12) throw std::invalid_argument("make_patch: heading parallel to normal");
  p.tangent = t.normalized();
  p.binormal = p.normal.cross(p.tangent);
  p.half_length = half_length;
  p.half_width = half_width;
  p.friction = friction;
  require_valid(p);
  return p;
}

inline Mat3 skew(const Vec3& v) {
  Mat3 S;
  S << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return S;
}

}  // namespace toppmpc
