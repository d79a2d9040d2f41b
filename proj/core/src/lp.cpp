// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace toppmpc {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

// Tableau simplex over the standard form min c'x, A x = b, x >= 0 with b >= 0
// maintained by row flips. Bland's rule on both the entering and leaving
// choices avoids cycling and keeps runs reproducible.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) : m_(int(a.rows())), n_(int(a.cols())) {
    blocked_.assign(size_t(m_), false);
    t_.resize(m_ + 1, n_ + m_ + 1);
    t_.setZero();
    t_.block(0, 0, m_, n_) = a;
    t_.block(0, n_, m_, m_).setIdentity();  // artificials
    t_.col(n_ + m_).head(m_) = b;
    for (int i = 0; i < m_; ++i) {
      if (t_(i, n_ + m_) < 0.0) t_.row(i) = -t_.row(i);
    }
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  // Phase 1: minimize the sum of artificials.
  bool make_feasible() {
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(n_ + m_);
    obj.tail(m_).setOnes();
    set_objective(obj);
    run();
    if (-t_(m_, n_ + m_) > kFeasTol) return false;
    // Pivot remaining artificials out of the basis where possible.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter >= 0) pivot(i, enter);
      // else: redundant row, its artificial stays basic at zero level.
    }
    return true;
  }

  LpStatus optimize(const Eigen::VectorXd& c) {
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(n_ + m_);
    obj.head(n_) = c;
    set_objective(obj);
    return run();
  }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = t_(i, n_ + m_);
    }
    return x;
  }

 private:
  void set_objective(const Eigen::VectorXd& obj) {
    t_.row(m_).setZero();
    t_.row(m_).head(n_ + m_) = obj.transpose();
    // Artificials that left the problem must never re-enter.
    for (int j = n_; j < n_ + m_; ++j) {
      bool basic = false;
      for (int i = 0; i < m_; ++i) basic |= (basis_[i] == j);
      if (!basic) blocked_[size_t(j - n_)] = true;
    }
    for (int i = 0; i < m_; ++i) {
      const double cb = t_(m_, basis_[i]);
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  LpStatus run() {
    const int max_iter = 200 * (n_ + m_ + 1);
    for (int iter = 0; iter < max_iter; ++iter) {
      int enter = -1;
      for (int j = 0; j < n_ + m_; ++j) {
        if (j >= n_ && blocked_[size_t(j - n_)]) continue;
        if (t_(m_, j) < -kPivotTol) {
          enter = j;
          break;  // Bland: smallest index
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a > kPivotTol) {
          const double ratio = t_(i, n_ + m_) / a;
          if (ratio < best - 1e-12 || (ratio < best + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
    return LpStatus::Unbounded;  // iteration cap: treat as failure
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  int m_, n_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  std::vector<bool> blocked_;
};

}  // namespace

LpResult solve_lp(const Eigen::VectorXd& c,
                  const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq,
                  const Eigen::MatrixXd& a_in, const Eigen::VectorXd& b_in) {
  const int n = int(c.size());
  const int me = int(a_eq.rows());
  const int mi = int(a_in.rows());
  // Slack variables turn inequalities into equalities.
  Eigen::MatrixXd a(me + mi, n + mi);
  a.setZero();
  if (me > 0) a.block(0, 0, me, n) = a_eq;
  if (mi > 0) {
    a.block(me, 0, mi, n) = a_in;
    a.block(me, n, mi, mi).setIdentity();
  }
  Eigen::VectorXd b(me + mi);
  if (me > 0) b.head(me) = b_eq;
  if (mi > 0) b.tail(mi) = b_in;

  // Row equilibration keeps pivot tolerances meaningful when callers mix
  // constraint scales.
  for (int i = 0; i < me + mi; ++i) {
    const double norm = a.row(i).head(n).norm();
    if (norm > 1e-300) {
      a.row(i) /= norm;
      b(i) /= norm;
    }
  }
  // Uniform variable scaling brings the right-hand side to O(1).
  const double bscale = std::max(1.0, b.size() > 0 ? b.cwiseAbs().maxCoeff() : 1.0);
  b /= bscale;

  Tableau tab(a, b);
  LpResult res;
  if (!tab.make_feasible()) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  Eigen::VectorXd cx = Eigen::VectorXd::Zero(n + mi);
  cx.head(n) = c;
  res.status = tab.optimize(cx);
  if (res.status == LpStatus::Optimal) {
    res.x = bscale * tab.solution().head(n);
    res.objective = c.dot(res.x);
  }
  return res;
}

LpResult solve_lp_free(const Eigen::VectorXd& c,
                       const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq,
                       const Eigen::MatrixXd& a_in, const Eigen::VectorXd& b_in) {
  const int n = int(c.size());
  Eigen::VectorXd c2(2 * n);
  c2.head(n) = c;
  c2.tail(n) = -c;
  auto split = [n](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd s(m.rows(), 2 * n);
    if (m.rows() == 0) return Eigen::MatrixXd(0, 2 * n);
    s.leftCols(n) = m;
    s.rightCols(n) = -m;
    return s;
  };
  LpResult r = solve_lp(c2, split(a_eq), b_eq, split(a_in), b_in);
  if (r.status == LpStatus::Optimal) {
    Eigen::VectorXd x = r.x.head(n) - r.x.tail(n);
    r.x = x;
  }
  return r;
}

}  // namespace toppmpc
