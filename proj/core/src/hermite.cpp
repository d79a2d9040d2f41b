// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/hermite.hpp"

#include <algorithm>
#include <cmath>

#include "toppmpc/log.hpp"

namespace toppmpc::interp {

namespace {
constexpr double kRestVelocity = 1e-10;
constexpr double kScaleMin = 0.05;
constexpr double kScaleMax = 10.0;
}  // namespace

Vec3 HermiteCurve::eval(double s, int order) const {
  switch (order) {
    case 0: {
      const double h00 = 2 * s * s * s - 3 * s * s + 1;
      const double h10 = s * s * s - 2 * s * s + s;
      const double h01 = -2 * s * s * s + 3 * s * s;
      const double h11 = s * s * s - s * s;
      return h00 * p0 + h10 * v0 + h01 * p1 + h11 * v1;
    }
    case 1: {
      const double h00 = 6 * s * s - 6 * s;
      const double h10 = 3 * s * s - 4 * s + 1;
      const double h01 = -6 * s * s + 6 * s;
      const double h11 = 3 * s * s - 2 * s;
      return h00 * p0 + h10 * v0 + h01 * p1 + h11 * v1;
    }
    case 2: {
      const double h00 = 12 * s - 6;
      const double h10 = 6 * s - 4;
      const double h01 = -12 * s + 6;
      const double h11 = 6 * s - 2;
      return h00 * p0 + h10 * v0 + h01 * p1 + h11 * v1;
    }
    default:
      throw std::invalid_argument("HermiteCurve::eval: order must be 0, 1 or 2");
  }
}

TangentScales ogh_params(const BoundaryState& b) {
  TangentScales out;
  const Vec3 d = b.delta();
  const double a = b.v_cur.squaredNorm();
  const double bb = b.v_goal.squaredNorm();
  const double c = b.v_cur.dot(b.v_goal);
  // Stationarity of int ||H''||^2: 2 a l + c m = 3 (D.v0), c l + 2 bb m = 3 (D.v1).
  const double det = 4 * a * bb - c * c;
  if (det < 1e-14 * std::max(1.0, a * bb)) {
    out.status = TangentStatus::SingularSystem;
    return out;
  }
  const double r0 = 3 * d.dot(b.v_cur);
  const double r1 = 3 * d.dot(b.v_goal);
  out.lambda = (2 * bb * r0 - c * r1) / det;
  out.mu = (2 * a * r1 - c * r0) / det;
  return out;
}

TangentScales houba_params(const BoundaryState& b) {
  TangentScales out;
  const double n0 = b.v_cur.norm();
  const double n1 = b.v_goal.norm();
  if (n0 < kRestVelocity || n1 < kRestVelocity) {
    out.status = TangentStatus::ZeroVelocity;
    return out;
  }
  const Vec3 d = b.delta();
  const double a = b.v_cur.squaredNorm();
  const double bb = b.v_goal.squaredNorm();
  const double c = b.v_cur.dot(b.v_goal);
  const double den = 9 * a * bb - 4 * c * c;  // >= 5 a bb > 0 by Cauchy-Schwarz
  out.lambda = 6 * (3 * d.dot(b.v_cur) * bb - 2 * d.dot(b.v_goal) * c) / den;
  out.mu = 6 * (3 * d.dot(b.v_goal) * a - 2 * d.dot(b.v_cur) * c) / den;
  return out;
}

void PathSpline::append(const HermiteCurve& curve, double span) {
  if (span <= 0.0) throw std::invalid_argument("PathSpline::append: span must be positive");
  curves_.push_back(curve);
  s_max_ += span;
  knots_.push_back(s_max_);
}

Vec3 PathSpline::eval(double s, int order) const {
  if (curves_.empty()) throw std::logic_error("PathSpline: empty");
  s = std::clamp(s, 0.0, s_max_);
  size_t k = 0;
  while (k + 1 < curves_.size() && s >= knots_[k + 1]) ++k;
  const double span = knots_[k + 1] - knots_[k];
  const double u = (s - knots_[k]) / span;
  const Vec3 v = curves_[k].eval(u, order);
  // chain rule for the per-segment reparameterization
  if (order == 1) return v / span;
  if (order == 2) return v / (span * span);
  return v;
}

double houba_energy(const BoundaryState& b, double lambda, double mu) {
  const Vec3 v0 = b.v_cur.normalized();
  const Vec3 v1 = b.v_goal.normalized();
  const Vec3 r = 3 * b.delta() - lambda * v0 - mu * v1;
  return r.squaredNorm() + 0.5 * (lambda * lambda * v0.squaredNorm() + mu * mu * v1.squaredNorm());
}

double strain_energy(const BoundaryState& b, double lambda, double mu) {
  const Vec3 d = b.delta();
  const Vec3 v0 = lambda * b.v_cur;
  const Vec3 v1 = mu * b.v_goal;
  // int ||H''||^2 over the Hermite basis second derivatives.
  return 12 * d.squaredNorm() + 4 * v0.squaredNorm() + 4 * v1.squaredNorm() -
         12 * d.dot(v0) - 12 * d.dot(v1) + 4 * v0.dot(v1);
}

PreviewPath interpolate_preview_path(const BoundaryState& b, TangentMode mode) {
  PreviewPath out;
  const Vec3 delta = b.delta();
  if (delta.norm() < 1e-12) {
    out.status = PreviewPath::Status::DegenerateBoundary;
    return out;
  }
  const bool rest0 = b.v_cur.norm() < kRestVelocity;
  const bool rest1 = b.v_goal.norm() < kRestVelocity;

  HermiteCurve curve;
  curve.p0 = b.p_cur;
  curve.p1 = b.p_goal;

  if (rest0 && rest1) {
    // Exact straight segment: H(s) = p0 + s delta, p_ss == 0.
    curve.v0 = delta;
    curve.v1 = delta;
    out.lambda = out.mu = delta.norm();
    out.spline = PathSpline(curve);
    return out;
  }

  BoundaryState unit = b;
  if (!rest0) unit.v_cur.normalize();
  if (!rest1) unit.v_goal.normalize();

  auto clampScale = [&out](double v) {
    const double c = std::clamp(v, kScaleMin, kScaleMax);
    if (c != v) {
      out.clamped = true;
      TOPPMPC_LOG(1, "interp: tangent scale clamped from " << v << " to " << c);
    }
    return c;
  };

  if (rest0 || rest1) {
    // One-sided problem: minimize the selected criterion over the single
    // remaining magnitude, the other tangent being identically zero.
    const Vec3 vdir = rest0 ? unit.v_goal : unit.v_cur;
    const double dd = delta.dot(vdir);
    double scale;
    if (mode == TangentMode::Houba) {
      scale = 2.0 * dd;  // argmin ||3D - m v||^2 + m^2/2
    } else {
      scale = 1.5 * dd;  // argmin of the strain energy in one variable
    }
    scale = clampScale(scale);
    if (rest0) {
      curve.v0 = Vec3::Zero();
      curve.v1 = scale * vdir;
      out.mu = scale;
    } else {
      curve.v0 = scale * vdir;
      curve.v1 = Vec3::Zero();
      out.lambda = scale;
    }
    out.spline = PathSpline(curve);
    return out;
  }

  TangentScales ts = (mode == TangentMode::Houba) ? houba_params(unit) : ogh_params(unit);
  if (ts.status != TangentStatus::Ok) {
    ts.lambda = 1.0;
    ts.mu = 1.0;
  }
  out.lambda = clampScale(ts.lambda);
  out.mu = clampScale(ts.mu);
  curve.v0 = out.lambda * unit.v_cur;
  curve.v1 = out.mu * unit.v_goal;
  out.spline = PathSpline(curve);
  return out;
}

}  // namespace toppmpc::interp
