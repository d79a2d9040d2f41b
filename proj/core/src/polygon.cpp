// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "toppmpc/lp.hpp"

namespace toppmpc::geom {

namespace {
constexpr double kCrossTol = 1e-10;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-30) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}
}  // namespace

bool Polygon2::contains(const Vec2& p, double tol) const {
  if (degenerate || vertices.size() < 3) return false;
  for (size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % vertices.size()];
    if (cross2(b - a, p - a) < -tol) return false;
  }
  return true;
}

double Polygon2::area() const {
  if (degenerate || vertices.size() < 3) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % vertices.size()];
    s += cross2(a, b);
  }
  return 0.5 * s;
}

double Polygon2::violation(const Vec2& p) const {
  if (degenerate || vertices.size() < 3) return std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % vertices.size()];
    const Vec2 e = b - a;
    const double len = e.norm();
    if (len < 1e-15) continue;
    // outward normal of a CCW edge
    const Vec2 n(e.y() / len, -e.x() / len);
    worst = std::max(worst, n.dot(p - a));
  }
  return worst;
}

double Polygon2::distance(const Vec2& p) const {
  if (vertices.empty()) return std::numeric_limits<double>::infinity();
  if (contains(p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  if (vertices.size() == 1) return (p - vertices[0]).norm();
  for (size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % vertices.size()];
    best = std::min(best, point_segment_distance(p, a, b));
  }
  return best;
}

std::string Polygon2::to_json() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (i) os << ",";
    os << "[" << vertices[i].x() << "," << vertices[i].y() << "]";
  }
  os << "]";
  return os.str();
}

void HalfplaneSet::append(const Vec2& row, double rhs) {
  if (row.norm() < 1e-14) throw std::invalid_argument("HalfplaneSet: zero-norm row");
  B.conservativeResize(B.rows() + 1, 2);
  c.conservativeResize(c.size() + 1);
  B.row(B.rows() - 1) = row.transpose();
  c(c.size() - 1) = rhs;
}

void HalfplaneSet::append(const HalfplaneSet& other) {
  const int f0 = size();
  B.conservativeResize(f0 + other.size(), 2);
  c.conservativeResize(f0 + other.size());
  B.bottomRows(other.size()) = other.B;
  c.tail(other.size()) = other.c;
}

bool HalfplaneSet::satisfied(const Vec2& x, double tol) const {
  return max_violation(x) <= tol;
}

double HalfplaneSet::max_violation(const Vec2& x) const {
  if (size() == 0) return 0.0;
  return (B * x - c).maxCoeff();
}

Polygon2 convex_hull_2d(const std::vector<Vec2>& points) {
  if (points.empty()) throw std::invalid_argument("convex_hull_2d: no points");
  std::vector<Vec2> pts = points;
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return (a - b).norm() < 1e-14; }),
            pts.end());

  Polygon2 out;
  if (pts.size() <= 2) {
    out.vertices = pts;
    out.degenerate = true;
    return out;
  }

  // Andrew's monotone chain.
  std::vector<Vec2> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= kCrossTol) --k;
    hull[k++] = pts[i];
  }
  const size_t lower = k + 1;
  for (size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= kCrossTol) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  out.vertices = hull;
  out.degenerate = hull.size() < 3;
  return out;
}

ChebyshevResult chebyshev_center(const HalfplaneSet& h) {
  ChebyshevResult res;
  if (h.size() == 0) {
    res.status = PolyStatus::UnboundedPolygon;
    return res;
  }
  // max r  s.t.  B_i.x + r ||B_i|| <= c_i, written as min over (x, r).
  const int f = h.size();
  Eigen::MatrixXd a_in(f, 3);
  for (int i = 0; i < f; ++i) {
    a_in(i, 0) = h.B(i, 0);
    a_in(i, 1) = h.B(i, 1);
    a_in(i, 2) = h.B.row(i).norm();
  }
  Eigen::VectorXd obj(3);
  obj << 0, 0, -1;
  LpResult lp = solve_lp_free(obj, Eigen::MatrixXd(0, 3), Eigen::VectorXd(0), a_in, h.c);
  switch (lp.status) {
    case LpStatus::Infeasible:
      res.status = PolyStatus::EmptyPolygon;
      return res;
    case LpStatus::Unbounded:
      res.status = PolyStatus::UnboundedPolygon;
      return res;
    case LpStatus::Optimal:
      break;
  }
  if (lp.x(2) < 0.0) {
    // Radius can only be negative when the set itself is empty.
    res.status = PolyStatus::EmptyPolygon;
    return res;
  }
  res.status = PolyStatus::Ok;
  res.center = Vec2(lp.x(0), lp.x(1));
  res.radius = lp.x(2);
  return res;
}

PolygonResult polygon_from_dual_hull(const HalfplaneSet& h) {
  PolygonResult res;
  if (h.size() < 3) {
    res.status = (h.size() == 0) ? PolyStatus::EmptyPolygon : PolyStatus::UnboundedPolygon;
    return res;
  }

  Vec2 shift = Vec2::Zero();
  Eigen::VectorXd rhs = h.c;
  if (h.c.minCoeff() <= 1e-12) {
    const ChebyshevResult cc = chebyshev_center(h);
    if (cc.status != PolyStatus::Ok) {
      res.status = cc.status;
      return res;
    }
    if (cc.radius <= 1e-12) {
      res.status = PolyStatus::EmptyPolygon;  // empty interior
      return res;
    }
    shift = cc.center;
    rhs = h.c - h.B * shift;
  }

  // Normalized dual points: one per halfplane, hull vertices of which are
  // exactly the non-redundant edges. The hull runs on rescaled copies:
  // dual magnitudes go as 1 / polygon radius, and the hull's collinearity
  // cutoff is absolute.
  std::vector<Vec2> dual(size_t(h.size()));
  double dual_scale = 0.0;
  for (int i = 0; i < h.size(); ++i) {
    if (rhs(i) <= 1e-14) {
      res.status = PolyStatus::NumericallyIll;  // interior point not interior
      return res;
    }
    dual[size_t(i)] = Vec2(h.B(i, 0), h.B(i, 1)) / rhs(i);
    dual_scale = std::max(dual_scale, dual[size_t(i)].norm());
  }
  if (dual_scale <= 0.0) {
    res.status = PolyStatus::UnboundedPolygon;
    return res;
  }
  std::vector<Vec2> dual_unit = dual;
  for (Vec2& d : dual_unit) d /= dual_scale;

  Polygon2 dual_hull = convex_hull_2d(dual_unit);
  if (dual_hull.degenerate) {
    res.status = PolyStatus::UnboundedPolygon;
    return res;
  }
  // Origin strictly inside the dual hull <=> primal polygon bounded.
  if (!dual_hull.contains(Vec2::Zero(), 0.0) || dual_hull.violation(Vec2::Zero()) > -1e-14) {
    res.status = PolyStatus::UnboundedPolygon;
    return res;
  }

  // Map hull vertices back to input rows (the non-redundant halfplanes).
  std::vector<int> src(dual_hull.vertices.size(), -1);
  for (size_t i = 0; i < dual_hull.vertices.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < dual_unit.size(); ++j) {
      const double dist = (dual_unit[j] - dual_hull.vertices[i]).squaredNorm();
      if (dist < best) {
        best = dist;
        src[i] = int(j);
      }
    }
  }
  std::vector<Vec2> ds(src.size());
  for (size_t i = 0; i < src.size(); ++i) ds[i] = dual[size_t(src[i])];

  // Intersect consecutive edges d_i.y = 1, d_j.y = 1.
  std::vector<Vec2> verts;
  const size_t n = ds.size();
  size_t attempts = 0;
  for (size_t i = 0; i < ds.size() && attempts < 4 * n; ++i) {
    const Vec2& di = ds[i];
    const Vec2& dj = ds[(i + 1) % ds.size()];
    const double det = cross2(di, dj);
    if (std::abs(det) < 1e-12 * di.norm() * dj.norm()) {
      // Near-parallel consecutive edges: drop one and retry.
      const size_t drop = (i + 1) % ds.size();
      ds.erase(ds.begin() + long(drop));
      src.erase(src.begin() + long(drop));
      verts.clear();
      i = size_t(-1);
      ++attempts;
      if (ds.size() < 3) {
        res.status = PolyStatus::NumericallyIll;
        return res;
      }
      continue;
    }
    // Solve [di; dj] v = [1; 1].
    verts.emplace_back((dj.y() - di.y()) / det, (di.x() - dj.x()) / det);
  }
  for (Vec2& v : verts) v += shift;

  res.polygon.vertices = verts;
  res.polygon.degenerate = verts.size() < 3;
  res.active_halfplanes = int(ds.size());
  res.active_indices = src;
  res.status = PolyStatus::Ok;
  return res;
}

namespace {
struct BlEdge {
  Vec2 va, vb;   // inner vertices, CCW
  Vec2 da, db;   // support directions that produced them
  bool done = false;
};

double edge_gap_area(const BlEdge& e) {
  // Outer point: intersection of the two support lines da.x = da.va, db.x = db.vb.
  const double det = e.da.x() * e.db.y() - e.da.y() * e.db.x();
  if (std::abs(det) < 1e-13) return 0.0;
  const double ra = e.da.dot(e.va);
  const double rb = e.db.dot(e.vb);
  const Vec2 outer((ra * e.db.y() - rb * e.da.y()) / det, (e.da.x() * rb - e.db.x() * ra) / det);
  const Vec2 u = e.vb - e.va;
  const Vec2 w = outer - e.va;
  return 0.5 * std::abs(u.x() * w.y() - u.y() * w.x());
}
}  // namespace

PolygonResult bretl_lall_projection(const SupportOracle& oracle, double tol) {
  PolygonResult res;
  const double sq3 = std::sqrt(3.0) / 2.0;
  const Vec2 dirs[3] = {Vec2(1.0, 0.0), Vec2(-0.5, sq3), Vec2(-0.5, -sq3)};

  std::vector<Vec2> pts, pdirs;
  for (const Vec2& d : dirs) {
    auto p = oracle(d);
    if (!p) {
      res.status = PolyStatus::InfeasibleSet;
      return res;
    }
    pts.push_back(*p);
    pdirs.push_back(d);
  }

  // Degenerate seeds (point or segment) stay degenerate under expansion of
  // a convex set only if the set itself is; probe the segment normals once.
  auto area3 = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * std::abs(cross2(b - a, c - a));
  };
  if (area3(pts[0], pts[1], pts[2]) < 1e-16) {
    const Vec2 base = (pts[1] - pts[0]).norm() > (pts[2] - pts[0]).norm() ? pts[1] : pts[2];
    Vec2 e = base - pts[0];
    if (e.norm() < 1e-14) e = Vec2(1, 0);
    const Vec2 n(-e.y(), e.x());
    for (const Vec2& d : {Vec2(n.normalized()), Vec2(-n.normalized())}) {
      auto p = oracle(d);
      if (p) {
        pts.push_back(*p);
        pdirs.push_back(d);
      }
    }
  }

  Polygon2 inner = convex_hull_2d(pts);
  if (inner.degenerate) {
    res.status = PolyStatus::Ok;
    res.polygon = inner;
    res.polygon.degenerate = true;
    return res;
  }

  // Map hull vertices back to the directions that found them.
  auto dir_for = [&](const Vec2& v) {
    double best = std::numeric_limits<double>::infinity();
    size_t bi = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      const double d = (pts[i] - v).squaredNorm();
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    return pdirs[bi];
  };

  std::deque<BlEdge> queue;
  const size_t nv = inner.vertices.size();
  for (size_t i = 0; i < nv; ++i) {
    BlEdge e{inner.vertices[i], inner.vertices[(i + 1) % nv],
             dir_for(inner.vertices[i]), dir_for(inner.vertices[(i + 1) % nv])};
    queue.push_back(e);
  }

  std::vector<BlEdge> final_edges;
  int iterations = 0;
  const int max_iter = 4096;
  while (!queue.empty() && ++iterations < max_iter) {
    BlEdge e = queue.front();
    queue.pop_front();
    if (edge_gap_area(e) <= tol) {
      final_edges.push_back(e);
      continue;
    }
    Vec2 en = e.vb - e.va;
    const double len = en.norm();
    if (len < 1e-14) {
      final_edges.push_back(e);
      continue;
    }
    const Vec2 d(en.y() / len, -en.x() / len);  // outward normal (CCW interior on the left)
    auto p = oracle(d);
    if (!p || d.dot(*p - e.va) <= 1e-11 * (1.0 + p->norm())) {
      e.done = true;
      final_edges.push_back(e);  // no improvement: edge is exact
      continue;
    }
    queue.push_back(BlEdge{e.va, *p, e.da, d});
    queue.push_back(BlEdge{*p, e.vb, d, e.db});
  }
  for (const BlEdge& e : queue) final_edges.push_back(e);

  // The final edges tile the boundary; walk them head-to-tail so vertices
  // come out in CCW order. Support points found independently for the same
  // corner can differ in the last bits, which a tolerance-based hull may
  // resolve the wrong way; along the chain the spurious mid-edge points are
  // always chain-middles and can be dropped safely.
  std::vector<bool> used(final_edges.size(), false);
  std::vector<Vec2> ordered;
  ordered.reserve(final_edges.size());
  size_t at = 0;
  used[0] = true;
  ordered.push_back(final_edges[0].va);
  for (size_t step = 1; step < final_edges.size(); ++step) {
    const Vec2 tail = final_edges[at].vb;
    double best = std::numeric_limits<double>::infinity();
    size_t bi = final_edges.size();
    for (size_t j = 0; j < final_edges.size(); ++j) {
      if (used[j]) continue;
      const double dist = (final_edges[j].va - tail).squaredNorm();
      if (dist < best) {
        best = dist;
        bi = j;
      }
    }
    if (bi >= final_edges.size()) break;
    used[bi] = true;
    at = bi;
    ordered.push_back(final_edges[bi].va);
  }

  double scale = 1e-9;
  for (const Vec2& v : ordered) scale = std::max(scale, v.norm());
  auto drop_pass = [&ordered, scale]() {
    bool changed = false;
    for (size_t i = 0; i < ordered.size() && ordered.size() >= 3;) {
      const Vec2& prev = ordered[(i + ordered.size() - 1) % ordered.size()];
      const Vec2& cur = ordered[i];
      const Vec2& next = ordered[(i + 1) % ordered.size()];
      const bool dup = (cur - prev).norm() < 1e-10 * scale;
      const bool collinear = std::abs(cross2(cur - prev, next - prev)) < 1e-10 * scale * scale &&
                             (cur - prev).dot(next - cur) > 0.0;
      if (dup || collinear) {
        ordered.erase(ordered.begin() + long(i));
        changed = true;
      } else {
        ++i;
      }
    }
    return changed;
  };
  while (drop_pass()) {
  }

  res.polygon.vertices = ordered;
  res.polygon.degenerate = ordered.size() < 3;
  res.status = PolyStatus::Ok;
  return res;
}

Polygon2 clip_polygon(const Polygon2& poly, const Vec2& n, double d) {
  Polygon2 out;
  if (poly.degenerate || poly.vertices.size() < 3) {
    out.degenerate = true;
    return out;
  }
  const auto& v = poly.vertices;
  std::vector<Vec2> kept;
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec2& cur = v[i];
    const Vec2& nxt = v[(i + 1) % v.size()];
    const double fc = n.dot(cur) - d;
    const double fn = n.dot(nxt) - d;
    if (fc <= 1e-12) kept.push_back(cur);
    if ((fc < -1e-12 && fn > 1e-12) || (fc > 1e-12 && fn < -1e-12)) {
      const double t = fc / (fc - fn);
      kept.push_back(cur + t * (nxt - cur));
    }
  }
  if (kept.size() < 3) {
    out.vertices = kept;
    out.degenerate = true;
    return out;
  }
  return convex_hull_2d(kept);  // dedupes and restores strict convexity
}

HalfplaneSet halfplanes_of_polygon(const Polygon2& poly) {
  HalfplaneSet h = HalfplaneSet::empty();
  const auto& v = poly.vertices;
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    const Vec2 e = b - a;
    if (e.norm() < 1e-15) continue;
    const Vec2 n(e.y(), -e.x());  // outward for CCW order
    h.append(n.normalized(), n.normalized().dot(a));
  }
  return h;
}

double hausdorff_distance(const Polygon2& a, const Polygon2& b) {
  double h = 0.0;
  for (const Vec2& v : a.vertices) h = std::max(h, b.distance(v));
  for (const Vec2& v : b.vertices) h = std::max(h, a.distance(v));
  return h;
}

}  // namespace toppmpc::geom
