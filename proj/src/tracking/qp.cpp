#include "hlloco/tracking/qp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "hlloco/common/errors.hpp"

namespace hlloco::tracking {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One inequality a^T w >= b of the reduced problem, tied to a bound of x.
struct Row {
  Eigen::VectorXd a;
  double b = 0.0;
  int var = 0;
  bool upper = false;
};

// x = x0 + Z w parameterizes {x : A x = b}.
void null_space(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int n,
                Eigen::VectorXd& x0, Eigen::MatrixXd& Z) {
  if (A.rows() == 0) {
    x0 = Eigen::VectorXd::Zero(n);
    Z = Eigen::MatrixXd::Identity(n, n);
    return;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A.transpose());
  qr.setThreshold(1e-12);
  const int r = static_cast<int>(qr.rank());
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  x0 = A.completeOrthogonalDecomposition().solve(b);
  if ((A * x0 - b).norm() > 1e-8 * (1.0 + b.norm())) {
    throw QPInfeasible("inconsistent equality constraints");
  }
  Z = Q.rightCols(n - r);
}

}  // namespace

QPResult qp_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& f,
                  const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq,
                  const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                  const QPOptions& options) {
  const int n = static_cast<int>(f.size());
  const int k = static_cast<int>(A_eq.rows());

  Eigen::VectorXd x0;
  Eigen::MatrixXd Z;
  null_space(A_eq, b_eq, n, x0, Z);
  const int d = static_cast<int>(Z.cols());
  const Eigen::MatrixXd Hr = Z.transpose() * H * Z;
  const Eigen::VectorXd fr = Z.transpose() * (H * x0 + f);
  Eigen::LLT<Eigen::MatrixXd> llt(Hr);
  if (llt.info() != Eigen::Success) {
    throw QPInfeasible("reduced Hessian is not positive definite");
  }

  std::vector<Row> rows;
  for (int i = 0; i < n; ++i) {
    if (lower[i] > -kInf) {
      rows.push_back({Z.row(i).transpose(), lower[i] - x0[i], i, false});
    }
    if (upper[i] < kInf) {
      rows.push_back({-Z.row(i).transpose(), x0[i] - upper[i], i, true});
    }
  }

  Eigen::VectorXd w = llt.solve(-fr);
  std::vector<int> active;
  std::vector<double> u;  // multipliers of the active rows
  QPResult result;
  result.status = QPStatus::kOptimal;
  int iter = 0;

  auto directions = [&](const Eigen::VectorXd& np, Eigen::VectorXd& z,
                        Eigen::VectorXd& r) {
    const int q = static_cast<int>(active.size());
    const Eigen::VectorXd hinv_np = llt.solve(np);
    if (q == 0) {
      r.resize(0);
      z = hinv_np;
      return;
    }
    Eigen::MatrixXd N(d, q);
    for (int j = 0; j < q; ++j) N.col(j) = rows[active[j]].a;
    const Eigen::MatrixXd hinv_N = llt.solve(N);
    const Eigen::MatrixXd S = N.transpose() * hinv_N;
    r = S.ldlt().solve(N.transpose() * hinv_np);
    z = hinv_np - hinv_N * r;
  };

  while (true) {
    int p = -1;
    double worst = options.feasibility_tol;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      const double viol = rows[i].b - rows[i].a.dot(w);
      if (viol > worst * (1.0 + std::abs(rows[i].b))) {
        bool is_active = false;
        for (int j : active) is_active |= (j == i);
        if (!is_active) {
          worst = viol / (1.0 + std::abs(rows[i].b));
          p = i;
        }
      }
    }
    if (p < 0) break;
    if (++iter > options.max_iterations) {
      result.status = QPStatus::kMaxIterations;
      break;
    }

    double up = 0.0;
    bool added = false;
    while (!added) {
      Eigen::VectorXd z, r;
      directions(rows[p].a, z, r);
      double t1 = kInf;
      int drop = -1;
      for (int j = 0; j < r.size(); ++j) {
        if (r[j] > 1e-14 && u[j] / r[j] < t1) {
          t1 = u[j] / r[j];
          drop = j;
        }
      }
      // A new row already in the span of the active ones leaves almost none
      // of its curvature after projection; compare with the unprojected value
      // so the test does not depend on scaling.
      const double zn = z.dot(rows[p].a);
      const double full = rows[p].a.dot(llt.solve(rows[p].a));
      const double t2 = zn > 1e-10 * full
                            ? (rows[p].b - rows[p].a.dot(w)) / zn
                            : kInf;
      if (t1 == kInf && t2 == kInf) {
        throw QPInfeasible("bound constraints cannot be satisfied");
      }
      const double t = std::min(t1, t2);
      if (t2 < kInf) w += t * z;
      for (int j = 0; j < r.size(); ++j) u[j] -= t * r[j];
      up += t;
      if (t2 <= t1) {
        active.push_back(p);
        u.push_back(up);
        added = true;
      } else {
        active.erase(active.begin() + drop);
        u.erase(u.begin() + drop);
      }
      if (++iter > options.max_iterations) {
        result.status = QPStatus::kMaxIterations;
        break;
      }
    }
    if (result.status == QPStatus::kMaxIterations) break;
  }

  result.x = x0 + Z * w;
  result.iterations = iter;

  // Polish: with the active bounds as equalities the remaining problem is
  // better conditioned than the dual iteration, and the bounds hold exactly.
  // Skipped when the active rows are degenerate (more than the reduced
  // dimension, or dependent on the equalities); the dual iterate stands.
  const int q = static_cast<int>(active.size());
  if (result.status == QPStatus::kOptimal && q > 0 && q <= d) {
    Eigen::MatrixXd A_act(k + q, n);
    Eigen::VectorXd b_act(k + q);
    if (k > 0) {
      A_act.topRows(k) = A_eq;
      b_act.head(k) = b_eq;
    }
    for (int j = 0; j < q; ++j) {
      const Row& row = rows[active[j]];
      A_act.row(k + j).setZero();
      A_act(k + j, row.var) = 1.0;
      b_act[k + j] = row.upper ? upper[row.var] : lower[row.var];
    }
    Eigen::VectorXd xa;
    Eigen::MatrixXd Za;
    try {
      null_space(A_act, b_act, n, xa, Za);
      if (Za.cols() > 0) {
        const Eigen::MatrixXd Ha = Za.transpose() * H * Za;
        xa += Za * Ha.ldlt().solve(-Za.transpose() * (H * xa + f));
      }
      for (int j = 0; j < q; ++j) xa[rows[active[j]].var] = b_act[k + j];
      result.x = xa;
    } catch (const QPInfeasible&) {
    }
  }

  // Recover full-space multipliers from the active bounds.
  const Eigen::VectorXd g = H * result.x + f;
  Eigen::MatrixXd E(n, k + q);
  if (k > 0) E.leftCols(k) = A_eq.transpose();
  for (int j = 0; j < q; ++j) {
    E.col(k + j).setZero();
    E(rows[active[j]].var, k + j) = 1.0;
  }
  const Eigen::VectorXd m =
      (k + q > 0)
          ? Eigen::VectorXd(E.completeOrthogonalDecomposition().solve(g))
          : Eigen::VectorXd();
  result.nu = m.head(k);
  result.mu = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < q; ++j) result.mu[rows[active[j]].var] += m[k + j];
  return result;
}

}  // namespace hlloco::tracking
