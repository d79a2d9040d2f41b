// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace toppmpc {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// Minimize c'x subject to A_eq x = b_eq, A_in x <= b_in, x >= 0.
/// Dense two-phase simplex with Bland's pivoting rule; deterministic,
/// sized for the small problems this project produces (tens of variables).
/// Either constraint block may be empty (0 rows).
LpResult solve_lp(const Eigen::VectorXd& c,
                  const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq,
                  const Eigen::MatrixXd& a_in, const Eigen::VectorXd& b_in);

/// Same problem with free (sign-unconstrained) variables, handled by the
/// usual x = x+ - x- split.
LpResult solve_lp_free(const Eigen::VectorXd& c,
                       const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq,
                       const Eigen::MatrixXd& a_in, const Eigen::VectorXd& b_in);

}  // namespace toppmpc
