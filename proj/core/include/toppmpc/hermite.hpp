// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "toppmpc/types.hpp"

namespace toppmpc::interp {

/// Cubic H with H(0)=p0, H'(0)=v0, H(1)=p1, H'(1)=v1 on the unit interval.
struct HermiteCurve {
  Vec3 p0, v0, p1, v1;

  Vec3 eval(double s, int order = 0) const;
};

/// Boundary data of a preview path. Velocities may be zero (rest boundary).
struct BoundaryState {
  Vec3 p_cur = Vec3::Zero();
  Vec3 v_cur = Vec3::Zero();
  Vec3 p_goal = Vec3::Zero();
  Vec3 v_goal = Vec3::Zero();

  Vec3 delta() const { return p_goal - p_cur; }
};

enum class TangentStatus { Ok, SingularSystem, ZeroVelocity };

struct TangentScales {
  TangentStatus status = TangentStatus::Ok;
  double lambda = 1.0;
  double mu = 1.0;
};

/// Strain-energy-optimal tangent magnitudes: the unique minimizer of
/// int ||H''||^2 ds over (lambda, mu), from the 2x2 normal equations.
TangentScales ogh_params(const BoundaryState& b);

/// Tangent magnitudes minimizing a uniform bound on ||H''||^2:
///   lambda* = 6 [3 (D.v0)|v1|^2 - 2 (D.v1)(v0.v1)] / [9 |v0|^2 |v1|^2 - 4 (v0.v1)^2]
/// and symmetrically for mu*.
TangentScales houba_params(const BoundaryState& b);

enum class TangentMode { Houba, Ogh };

/// Piecewise cubic Hermite path with evaluators for p, p_s, p_ss.
class PathSpline {
 public:
  PathSpline() = default;
  /// Single segment over [0, 1].
  explicit PathSpline(const HermiteCurve& curve) { append(curve, 1.0); }

  /// Append a segment covering the next `span` of path index.
  void append(const HermiteCurve& curve, double span);

  double s_max() const { return s_max_; }
  size_t segment_count() const { return curves_.size(); }

  Vec3 position(double s) const { return eval(s, 0); }
  Vec3 velocity(double s) const { return eval(s, 1); }   // dp/ds
  Vec3 acceleration(double s) const { return eval(s, 2); }  // d2p/ds2

 private:
  Vec3 eval(double s, int order) const;

  std::vector<HermiteCurve> curves_;
  std::vector<double> knots_ = {0.0};
  double s_max_ = 0.0;
};

struct PreviewPath {
  enum class Status { Ok, DegenerateBoundary } status = Status::Ok;
  PathSpline spline;
  double lambda = 0.0;
  double mu = 0.0;
  bool clamped = false;
};

/// Interpolate a one-segment preview path between boundary states. Velocity
/// norms only set directions; tangent magnitudes come from the selected mode
/// and are clamped to [0.05, 10]. Rest boundaries fall back to zero tangents
/// (or an exact straight segment when both ends are at rest).
PreviewPath interpolate_preview_path(const BoundaryState& b, TangentMode mode = TangentMode::Houba);

/// Objective whose stationary point defines the HOUBA magnitudes, with unit
/// direction carriers: ||3 D - l v0 - m v1||^2 + (l^2 |v0|^2 + m^2 |v1|^2)/2.
double houba_energy(const BoundaryState& b, double lambda, double mu);

/// Strain energy int_0^1 ||H''||^2 ds of the scaled-tangent interpolant.
double strain_energy(const BoundaryState& b, double lambda, double mu);

}  // namespace toppmpc::interp
