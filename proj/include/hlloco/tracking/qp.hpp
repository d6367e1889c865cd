#pragma once

#include <Eigen/Dense>

namespace hlloco::tracking {

enum class QPStatus { kOptimal, kMaxIterations, kInfeasible };

struct QPResult {
  Eigen::VectorXd x;
  /// Multipliers with H x + f = A_eq^T nu + mu; mu >= 0 on active lower
  /// bounds, <= 0 on active upper bounds, 0 elsewhere.
  Eigen::VectorXd nu;
  Eigen::VectorXd mu;
  QPStatus status = QPStatus::kOptimal;
  int iterations = 0;
};

struct QPOptions {
  int max_iterations = 200;
  double feasibility_tol = 1e-10;
};

/// min 1/2 x^T H x + f^T x  s.t.  A_eq x = b_eq,  lower <= x <= upper.
/// Infinite bounds are ignored. H only needs to be positive definite on the
/// null space of A_eq. Equalities are eliminated with a QR null-space basis,
/// the bounds are handled by a Goldfarb-Idnani dual active-set method on the
/// reduced problem. On MaxIterations the last iterate is returned with that
/// status; the caller decides whether to use it.
QPResult qp_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& f,
                  const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq,
                  const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                  const QPOptions& options = {});

}  // namespace hlloco::tracking
