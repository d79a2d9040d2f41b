// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "toppmpc/types.hpp"

namespace toppmpc::geom {

/// Convex polygon with counter-clockwise vertices. A polygon built from
/// fewer than 3 distinct points (or a fully collinear set) is flagged
/// degenerate; downstream constraint code treats degenerate as empty.
struct Polygon2 {
  std::vector<Vec2> vertices;
  bool degenerate = false;

  bool contains(const Vec2& p, double tol = 1e-9) const;
  double area() const;
  /// Signed distance-like measure: max over edges of outward violation
  /// (negative strictly inside, 0 on boundary). Degenerate -> +inf.
  double violation(const Vec2& p) const;
  /// Euclidean distance from p to the polygon (0 if inside).
  double distance(const Vec2& p) const;
  std::string to_json() const;
};

/// {x in R^2 : B x <= c}; rows with (near-)zero norm are rejected.
struct HalfplaneSet {
  Eigen::MatrixXd B;  // F x 2
  Eigen::VectorXd c;  // F

  int size() const { return int(B.rows()); }
  void append(const Vec2& row, double rhs);
  void append(const HalfplaneSet& other);
  bool satisfied(const Vec2& x, double tol = 1e-9) const;
  double max_violation(const Vec2& x) const;
  static HalfplaneSet empty() { return {Eigen::MatrixXd(0, 2), Eigen::VectorXd(0)}; }
};

/// CCW hull; interior and collinear points dropped (1e-10 cross tolerance).
Polygon2 convex_hull_2d(const std::vector<Vec2>& points);

enum class PolyStatus { Ok, EmptyPolygon, UnboundedPolygon, InfeasibleSet, NumericallyIll };

struct ChebyshevResult {
  PolyStatus status = PolyStatus::EmptyPolygon;
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

/// Center of the largest inscribed disk, from a single linear program.
ChebyshevResult chebyshev_center(const HalfplaneSet& h);

struct PolygonResult {
  PolyStatus status = PolyStatus::EmptyPolygon;
  Polygon2 polygon;
  /// Number of non-redundant input halfplanes (vertices of the dual hull).
  int active_halfplanes = 0;
  /// Input row indices of those halfplanes (dual-hull route only).
  std::vector<int> active_indices;
};

/// Vertex enumeration of a bounded halfplane intersection by convex hull of
/// the normalized dual points. If the origin is not strictly interior the
/// coordinates are first shifted by the Chebyshev center.
PolygonResult polygon_from_dual_hull(const HalfplaneSet& h);

/// Support oracle: for a unit direction d, return the extreme point of the
/// (projected) feasible set maximizing d.x, or nullopt when infeasible.
using SupportOracle = std::function<std::optional<Vec2>(const Vec2& direction)>;

/// Recursive projection: grow an inner polygon by support queries, splitting
/// edges while the inner/outer area gap exceeds tol.
PolygonResult bretl_lall_projection(const SupportOracle& oracle, double tol = 1e-4);

/// Clip polygon by halfplane n.x <= d (Sutherland-Hodgman step).
Polygon2 clip_polygon(const Polygon2& poly, const Vec2& n, double d);

/// Edge representation {B x <= c} of a CCW polygon.
HalfplaneSet halfplanes_of_polygon(const Polygon2& poly);

/// Symmetric Hausdorff distance between two convex polygons.
double hausdorff_distance(const Polygon2& a, const Polygon2& b);

}  // namespace toppmpc::geom
