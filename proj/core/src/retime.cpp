// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/retime.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace toppmpc::topp {

namespace {

constexpr double kSlack = 1e-9;

/// Horizontal slice {a : (a, b) in poly} of a convex polygon. Queries that
/// drift marginally past the b-range (accumulated envelope rounding) are
/// clamped back onto it.
std::optional<std::pair<double, double>> slice_at_b(const geom::Polygon2& poly, double b) {
  if (poly.degenerate || poly.vertices.size() < 3) return std::nullopt;
  const auto& v = poly.vertices;
  double bmin = std::numeric_limits<double>::infinity();
  double bmax = -std::numeric_limits<double>::infinity();
  for (const Vec2& p : v) {
    bmin = std::min(bmin, p.y());
    bmax = std::max(bmax, p.y());
  }
  const double tol = 1e-7 * (1.0 + std::abs(b));
  if (b < bmin - tol || b > bmax + tol) return std::nullopt;
  b = std::clamp(b, bmin, bmax);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    const double pb = p.y() - b;
    const double qb = q.y() - b;
    if (std::abs(pb) <= kSlack) {
      lo = std::min(lo, p.x());
      hi = std::max(hi, p.x());
    }
    if ((pb < -kSlack && qb > kSlack) || (pb > kSlack && qb < -kSlack)) {
      const double t = pb / (pb - qb);
      const double x = p.x() + t * (q.x() - p.x());
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

struct Interval {
  double lo = 0.0;
  double hi = -1.0;
  bool empty() const { return hi < lo; }
};

}  // namespace

double VelocityProfile::sd_at(double si) const {
  if (s.size() < 2) return std::sqrt(std::max(0.0, b.empty() ? 0.0 : b[0]));
  si = std::clamp(si, s.front(), s.back());
  size_t i = 0;
  while (i + 2 < s.size() && si >= s[i + 1]) ++i;
  const double u = (si - s[i]) / (s[i + 1] - s[i]);
  const double bi = b[i] + u * (b[i + 1] - b[i]);
  return std::sqrt(std::max(0.0, bi));
}

double VelocityProfile::time_at(double si) const {
  if (s.size() < 2) return 0.0;
  si = std::clamp(si, s.front(), s.back());
  size_t i = 0;
  while (i + 2 < s.size() && si >= s[i + 1]) ++i;
  const double u = (si - s[i]) / (s[i + 1] - s[i]);
  const double bi = b[i] + u * (b[i + 1] - b[i]);
  const double denom = std::sqrt(std::max(0.0, b[i])) + std::sqrt(std::max(0.0, bi));
  if (denom <= 0.0) return t[i];
  return t[i] + 2.0 * (si - s[i]) / denom;
}

VelocityProfile::TimeSample VelocityProfile::sample_at_time(double t_query) const {
  TimeSample out;
  if (s.size() < 2) return out;
  if (t_query >= t.back()) {
    out.s = s.back();
    out.sd = std::sqrt(std::max(0.0, b.back()));
    return out;
  }
  t_query = std::max(0.0, t_query);
  size_t i = 0;
  while (i + 2 < t.size() && t_query >= t[i + 1]) ++i;
  const double a = accel(i);
  const double tau = t_query - t[i];
  const double sd_i = std::sqrt(std::max(0.0, b[i]));
  out.s = std::min(s[i + 1], s[i] + sd_i * tau + 0.5 * a * tau * tau);
  out.sd = std::max(0.0, sd_i + a * tau);
  out.sdd = a;
  return out;
}

double sddmax_for_swing(double s_trans, double t_swing, double sd0) {
  return ((s_trans / t_swing) * (s_trans / t_swing) - sd0 * sd0) / (2.0 * s_trans);
}

RetimeProblem apply_sddmax(RetimeProblem problem, double sdd_max, double s_trans) {
  problem.sdd_max = sdd_max;
  problem.sdd_max_until = s_trans;
  return problem;
}

RetimeResult retime(const RetimeProblem& problem) {
  RetimeResult res;
  const double s_max = problem.path.s_max();
  if (!(problem.ds > 0.0) || !(s_max > 0.0) || problem.sd_start < 0.0) {
    throw std::invalid_argument("retime: invalid problem");
  }
  const int n_steps = std::max(1, int(std::lround(s_max / problem.ds)));
  const double ds = s_max / n_steps;  // snap the step to divide the range
  const int n = n_steps + 1;

  std::vector<double> grid(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) grid[size_t(i)] = i * ds;
  grid.back() = s_max;

  // Collect constraint polygons at the collocation points 0..n-2.
  std::vector<geom::Polygon2> polys(static_cast<size_t>(n_steps));
  double edge_sum = 0.0;
  for (int i = 0; i < n_steps; ++i) {
    ConstraintPolygonResult cp = problem.constraints(i, grid[size_t(i)]);
    if (cp.status != geom::PolyStatus::Ok || cp.value.empty()) {
      res.status = RetimeStatus::NonParameterizable;
      res.infeasible_index = i;
      res.infeasible_s = grid[size_t(i)];
      return res;
    }
    edge_sum += cp.value.reduced_count;
    geom::Polygon2 poly = cp.value.polygon;
    if (problem.sdd_max && grid[size_t(i)] < problem.sdd_max_until - 1e-12) {
      // Upper bound only: the synchronization argument needs sdd <= cap,
      // and braking must never be forbidden by it.
      poly = geom::clip_polygon(poly, Vec2(1.0, 0.0), *problem.sdd_max);
      if (poly.degenerate || poly.vertices.size() < 3) {
        res.status = RetimeStatus::NonParameterizable;
        res.infeasible_index = i;
        res.infeasible_s = grid[size_t(i)];
        return res;
      }
    }
    polys[size_t(i)] = std::move(poly);
  }

  // Backward pass: controllable interval of b at each grid point.
  const bool dbg = std::getenv("TOPPMPC_RT_DEBUG") != nullptr;
  std::vector<Interval> ctrl(static_cast<size_t>(n));
  const double end_cap = std::isfinite(problem.sd_end_max)
                             ? problem.sd_end_max * problem.sd_end_max
                             : std::numeric_limits<double>::infinity();
  ctrl[size_t(n - 1)] = {0.0, end_cap};
  for (int i = n - 2; i >= 0; --i) {
    const Interval& nxt = ctrl[size_t(i + 1)];
    geom::Polygon2 q = polys[size_t(i)];
    // b + 2 ds a within the next controllable interval
    if (std::isfinite(nxt.hi)) q = geom::clip_polygon(q, Vec2(2.0 * ds, 1.0), nxt.hi + kSlack);
    // b + 2 ds a >= nxt.lo; with nxt.lo = 0 this still bites (the next b
    // may not go negative).
    q = geom::clip_polygon(q, Vec2(-2.0 * ds, -1.0), -nxt.lo + kSlack);
    if (dbg) {
      fprintf(stderr, "bwd i=%d nxt=[%g,%g] q verts=%zu degen=%d\n", i, nxt.lo, nxt.hi,
              q.vertices.size(), int(q.degenerate));
    }
    if (q.degenerate || q.vertices.size() < 3) {
      // A flattened slice may still be usable if it collapses to a segment;
      // treat as empty (fail) - the grid is expected to resolve this.
      res.status = RetimeStatus::NonParameterizable;
      res.infeasible_index = i;
      res.infeasible_s = grid[size_t(i)];
      return res;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : q.vertices) {
      lo = std::min(lo, v.y());
      hi = std::max(hi, v.y());
    }
    ctrl[size_t(i)] = {std::max(0.0, lo - kSlack), hi + kSlack};
    if (ctrl[size_t(i)].empty()) {
      res.status = RetimeStatus::NonParameterizable;
      res.infeasible_index = i;
      res.infeasible_s = grid[size_t(i)];
      return res;
    }
  }

  // Forward pass: greedy maximization of b within the controllable tube.
  VelocityProfile prof;
  prof.s = grid;
  prof.b.assign(size_t(n), 0.0);
  prof.t.assign(size_t(n), 0.0);

  double b0 = problem.sd_start * problem.sd_start;
  const Interval& c0 = ctrl[0];
  if (b0 > c0.hi) {
    if (b0 <= c0.hi * (1.0 + problem.start_clamp_rel) + 1e-12) {
      b0 = c0.hi;
      prof.start_clamped = true;
    } else {
      res.status = RetimeStatus::NonParameterizable;
      res.infeasible_index = 0;
      res.infeasible_s = 0.0;
      return res;
    }
  } else if (b0 < c0.lo) {
    if (b0 >= c0.lo * (1.0 - problem.start_clamp_rel) - 1e-12) {
      b0 = c0.lo;
      prof.start_clamped = true;
    } else {
      res.status = RetimeStatus::NonParameterizable;
      res.infeasible_index = 0;
      res.infeasible_s = 0.0;
      return res;
    }
  }
  prof.b[0] = b0;

  for (int i = 0; i < n_steps; ++i) {
    const double bi = prof.b[size_t(i)];
    auto slice = slice_at_b(polys[size_t(i)], bi);
    if (dbg) {
      fprintf(stderr, "fwd i=%d bi=%.12g slice=[%g,%g] ok=%d nxt=[%g,%g]\n", i, bi,
              slice ? slice->first : 0.0, slice ? slice->second : 0.0, int(bool(slice)),
              ctrl[size_t(i + 1)].lo, ctrl[size_t(i + 1)].hi);
    }
    if (!slice) {
      res.status = RetimeStatus::NonParameterizable;
      res.infeasible_index = i;
      res.infeasible_s = grid[size_t(i)];
      return res;
    }
    const Interval& nxt = ctrl[size_t(i + 1)];
    double a_hi = slice->second;
    if (std::isfinite(nxt.hi)) a_hi = std::min(a_hi, (nxt.hi - bi) / (2.0 * ds));
    const double a_lo = std::max(slice->first, (nxt.lo - bi) / (2.0 * ds));
    if (a_hi < a_lo) {
      // Tolerate rounding pinches between the slice and the controllable
      // tube; anything larger is a genuine failure.
      if (a_hi < a_lo - 1e-6 * (1.0 + std::abs(a_lo))) {
        res.status = RetimeStatus::NonParameterizable;
        res.infeasible_index = i;
        res.infeasible_s = grid[size_t(i)];
        return res;
      }
      a_hi = a_lo;
    }
    const double a = a_hi;
    double bn = std::max(0.0, bi + 2.0 * ds * a);
    if (std::isfinite(nxt.hi)) bn = std::min(bn, nxt.hi);
    bn = std::max(bn, std::max(0.0, nxt.lo));
    if (bi <= 1e-14 && bn <= 1e-14) {
      res.status = RetimeStatus::Stalled;
      res.infeasible_index = i;
      res.infeasible_s = grid[size_t(i)];
      return res;
    }
    prof.b[size_t(i + 1)] = bn;
    prof.t[size_t(i + 1)] =
        prof.t[size_t(i)] + 2.0 * ds / (std::sqrt(bi) + std::sqrt(bn));
  }

  prof.duration = prof.t.back();
  res.profile = std::move(prof);
  res.polygon_edges_mean = edge_sum / n_steps;
  res.status = RetimeStatus::Ok;
  return res;
}

}  // namespace toppmpc::topp
