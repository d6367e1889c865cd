#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hlloco/common/errors.hpp"
#include "hlloco/rigid_body/pose.hpp"
#include "hlloco/rigid_body/simulator.hpp"
#include "hlloco/tracking/controllers.hpp"
#include "hlloco/tracking/qp.hpp"
#include "test_support.hpp"

namespace hlloco::tracking {
namespace {

using rigid_body::FullState;
using rigid_body::RobotModel;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- qp_solve

double objective(const Eigen::MatrixXd& H, const Eigen::VectorXd& f,
                 const Eigen::VectorXd& x) {
  return 0.5 * x.dot(H * x) + f.dot(x);
}

// Enumerates every assignment of each bounded variable to free / lower /
// upper, solves the equality-constrained subproblem and keeps the best
// feasible point.
Eigen::VectorXd enumerate_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& f,
                             const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi) {
  const int n = static_cast<int>(f.size());
  int combos = 1;
  for (int i = 0; i < n; ++i) combos *= 3;
  double best = kInf;
  Eigen::VectorXd best_x;
  for (int code = 0; code < combos; ++code) {
    std::vector<int> fixed;
    std::vector<double> value;
    int c = code;
    bool skip = false;
    for (int i = 0; i < n; ++i) {
      const int s = c % 3;
      c /= 3;
      if (s == 1) {
        if (lo[i] == -kInf) skip = true;
        fixed.push_back(i);
        value.push_back(lo[i]);
      } else if (s == 2) {
        if (hi[i] == kInf) skip = true;
        fixed.push_back(i);
        value.push_back(hi[i]);
      }
    }
    if (skip) continue;
    const int k = static_cast<int>(A.rows());
    const int nf = static_cast<int>(fixed.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + k + nf, n + k + nf);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + k + nf);
    K.topLeftCorner(n, n) = H;
    K.block(0, n, n, k) = A.transpose();
    K.block(n, 0, k, n) = A;
    rhs.head(n) = -f;
    rhs.segment(n, k) = b;
    for (int j = 0; j < nf; ++j) {
      K(fixed[j], n + k + j) = 1.0;
      K(n + k + j, fixed[j]) = 1.0;
      rhs[n + k + j] = value[j];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (lu.rank() < K.rows()) continue;
    const Eigen::VectorXd x = lu.solve(rhs).head(n);
    bool feasible = (A * x - b).norm() < 1e-9;
    for (int i = 0; i < n; ++i) {
      feasible &= x[i] >= lo[i] - 1e-9 && x[i] <= hi[i] + 1e-9;
    }
    if (feasible && objective(H, f, x) < best) {
      best = objective(H, f, x);
      best_x = x;
    }
  }
  return best_x;
}

void expect_kkt(const Eigen::MatrixXd& H, const Eigen::VectorXd& f,
                const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                const QPResult& r) {
  ASSERT_EQ(r.status, QPStatus::kOptimal);
  const Eigen::VectorXd x = r.x;
  if (A.rows() > 0) EXPECT_LT((A * x - b).norm(), 1e-9);
  for (int i = 0; i < x.size(); ++i) {
    EXPECT_GE(x[i], lo[i] - 1e-9);
    EXPECT_LE(x[i], hi[i] + 1e-9);
    if (r.mu[i] > 1e-9) EXPECT_NEAR(x[i], lo[i], 1e-9);
    if (r.mu[i] < -1e-9) EXPECT_NEAR(x[i], hi[i], 1e-9);
  }
  Eigen::VectorXd stat = H * x + f - r.mu;
  if (A.rows() > 0) stat -= A.transpose() * r.nu;
  EXPECT_LT(stat.norm(), 1e-8 * (1 + f.norm()));
}

TEST(QPSolveTest, UnconstrainedIsNewtonStep) {
  Eigen::MatrixXd H(2, 2);
  H << 4, 1, 1, 3;
  const Eigen::VectorXd f = Eigen::Vector2d(1, -2);
  const Eigen::VectorXd lo = Eigen::Vector2d::Constant(-kInf);
  const Eigen::VectorXd hi = Eigen::Vector2d::Constant(kInf);
  const auto r = qp_solve(H, f, Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), lo, hi);
  EXPECT_LT((r.x - H.ldlt().solve(-f)).norm(), 1e-14);
}

TEST(QPSolveTest, TwoVariablesOneActiveBound) {
  // min (x-2)^2 + (y-1)^2 with x <= 1: solution (1, 1), mu_x = -2.
  const Eigen::MatrixXd H = 2 * Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd f = Eigen::Vector2d(-4, -2);
  const Eigen::VectorXd lo = Eigen::Vector2d::Constant(-kInf);
  const Eigen::VectorXd hi = Eigen::Vector2d(1.0, kInf);
  const auto r = qp_solve(H, f, Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), lo, hi);
  EXPECT_NEAR(r.x[0], 1.0, 1e-14);
  EXPECT_NEAR(r.x[1], 1.0, 1e-14);
  EXPECT_NEAR(r.mu[0], -2.0, 1e-12);
  EXPECT_NEAR(r.mu[1], 0.0, 1e-12);
}

TEST(QPSolveTest, EqualityWithSingularFullHessian) {
  // Hessian zero on the second variable, pinned by the equality x0 + x1 = 1.
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2, 2);
  H(0, 0) = 2.0;
  const Eigen::VectorXd f = Eigen::Vector2d(0.0, 0.0);
  Eigen::MatrixXd A(1, 2);
  A << 1, 1;
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(1, 1.0);
  const auto r = qp_solve(H, f, A, b, Eigen::Vector2d::Constant(-kInf),
                          Eigen::Vector2d::Constant(kInf));
  EXPECT_NEAR(r.x[0], 0.0, 1e-14);
  EXPECT_NEAR(r.x[1], 1.0, 1e-14);
}

TEST(QPSolveTest, RandomProblemsMatchEnumeration) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> dim(2, 7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = trial < 55 ? dim(rng) : 10;
    const int k = trial % 3 == 0 ? 0 : std::min(n - 1, 1 + trial % 3);
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < R.size(); ++i) R.data()[i] = g(rng);
    const Eigen::MatrixXd H = R * R.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = 3 * g(rng);
    Eigen::MatrixXd A(k, n);
    for (int i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
    // Equalities through a point inside the box so the problem is feasible.
    Eigen::VectorXd inside(n);
    for (int i = 0; i < n; ++i) inside[i] = 0.3 * g(rng);
    const Eigen::VectorXd b = A * inside;
    Eigen::VectorXd lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = (i % 4 == 3) ? -kInf : inside[i] - 0.5 - std::abs(g(rng));
      hi[i] = (i % 5 == 4) ? kInf : inside[i] + 0.5 + std::abs(g(rng));
    }
    const auto r = qp_solve(H, f, A, b, lo, hi);
    expect_kkt(H, f, A, b, lo, hi, r);
    if (n <= 10) {
      const Eigen::VectorXd oracle = enumerate_qp(H, f, A, b, lo, hi);
      ASSERT_EQ(oracle.size(), n);
      EXPECT_LT((r.x - oracle).norm(), 1e-7 * (1 + oracle.norm())) << trial;
    }
  }
}

TEST(QPSolveTest, ConflictingBoundsAreInfeasible) {
  const Eigen::MatrixXd H = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd A(1, 2);
  A << 1, 1;
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(1, 5.0);
  const Eigen::VectorXd lo = Eigen::Vector2d(-1, -1), hi = Eigen::Vector2d(1, 1);
  EXPECT_THROW(qp_solve(H, Eigen::Vector2d::Zero(), A, b, lo, hi), QPInfeasible);
}

TEST(QPSolveTest, IterationCapIsReported) {
  const Eigen::MatrixXd H = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::VectorXd f = Eigen::Vector3d(-5, -5, -5);
  const Eigen::VectorXd lo = Eigen::Vector3d::Constant(-1), hi = Eigen::Vector3d::Constant(1);
  QPOptions opt;
  opt.max_iterations = 1;
  const auto r = qp_solve(H, f, Eigen::MatrixXd(0, 3), Eigen::VectorXd(0), lo, hi, opt);
  EXPECT_EQ(r.status, QPStatus::kMaxIterations);
}

// ---------------------------------------------------------------- outputs

class OutputTest : public ::testing::TestWithParam<const char*> {
 protected:
  RobotModel model_ = testing::robot_from_file(GetParam());
  std::mt19937_64 rng_{17};
};

TEST_P(OutputTest, JacobianMatchesFiniteDifferences) {
  const double alpha = 0.1;
  for (int trial = 0; trial < 20; ++trial) {
    const FullState s = testing::random_state(model_, rng_, 0.5);
    const auto kin = rigid_body::forward_kinematics(model_, s.q, s.qd);
    const auto out = actual_outputs(model_, kin, s, alpha, 0.75);
    for (int k = 0; k < model_.dof(); ++k) {
      const double h = 1e-6;
      FullState a = s, b = s;
      a.q[k] -= h;
      b.q[k] += h;
      const auto ya = actual_outputs(model_, rigid_body::forward_kinematics(model_, a.q, a.qd), a, alpha, 0.75).y_a;
      const auto yb = actual_outputs(model_, rigid_body::forward_kinematics(model_, b.q, b.qd), b, alpha, 0.75).y_a;
      const OutputVector fd = (yb - ya) / (2 * h);
      EXPECT_LT((out.Jy.col(k) - fd).norm(), 1e-6) << k;
    }
    // Jdot qd = d/dt (Jy) qd along qd.
    const double h = 1e-6;
    FullState a = s, b = s;
    a.q -= h * s.qd;
    b.q += h * s.qd;
    const auto Ja = actual_outputs(model_, rigid_body::forward_kinematics(model_, a.q, a.qd), a, alpha, 0.75).Jy;
    const auto Jb = actual_outputs(model_, rigid_body::forward_kinematics(model_, b.q, b.qd), b, alpha, 0.75).Jy;
    const OutputVector fd = (Jb - Ja) * s.qd / (2 * h);
    EXPECT_LT((out.Jy_dot_qd - fd).norm(), 1e-5 * (1 + fd.norm()));
  }
}

TEST_P(OutputTest, PitchRowIsIdentity) {
  const FullState s = testing::random_state(model_, rng_);
  const auto kin = rigid_body::forward_kinematics(model_, s.q, s.qd);
  const auto out = actual_outputs(model_, kin, s, 0.0, 0.75);
  EXPECT_EQ(out.y_a[0], s.q[2]);
  for (int k = 0; k < model_.dof(); ++k) EXPECT_EQ(out.Jy(0, k), k == 2 ? 1.0 : 0.0);
  EXPECT_EQ(out.Jy_dot_qd[0], 0.0);
}

TEST_P(OutputTest, ZeroErrorWhenDesiredMatches) {
  const FullState s = testing::random_state(model_, rng_);
  const auto kin = rigid_body::forward_kinematics(model_, s.q, s.qd);
  const auto out = actual_outputs(model_, kin, s, 0.05, 0.75);
  gait::DesiredOutputs d;
  d.y = out.y_a;
  d.yd = out.Jy * s.qd;
  d.ydd = OutputVector::Zero(model_.output_dim());
  const auto e = output_eval(model_, kin, s, d, 0.05, 0.75);
  EXPECT_EQ(e.y.norm(), 0.0);
  EXPECT_LT(e.dy.norm(), 1e-15);
}

INSTANTIATE_TEST_SUITE_P(Robots, OutputTest, ::testing::Values("rabbit", "walker2d"));

// ---------------------------------------------------------------- controllers

RobotModel unlimited(const char* name) {
  RobotModel m = testing::robot_from_file(name);
  m.torque_limits.setConstant(1e9);
  return m;
}

struct Scenario {
  FullState state;
  OutputErrors errors;
  rigid_body::DynamicsTerms terms;
};

Scenario random_scenario(const RobotModel& model, std::mt19937_64& rng,
                         double error_scale) {
  Scenario sc;
  sc.state = rigid_body::standing_state(model);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 2; i < model.dof(); ++i) sc.state.q[i] += 0.08 * g(rng);
  for (int i = 0; i < model.dof(); ++i) sc.state.qd[i] = 0.3 * g(rng);
  rigid_body::solve_leg_ik(model, sc.state.stance,
                           sc.state.contact_point, 0.0, sc.state.q);
  testing::make_feasible(model, sc.state);
  sc.terms = rigid_body::dynamics_terms(model, sc.state);
  const auto kin = rigid_body::forward_kinematics(model, sc.state.q, sc.state.qd);
  const auto out = actual_outputs(model, kin, sc.state, 0.0, model.nominal_base_height);
  gait::DesiredOutputs d;
  d.y = out.y_a;
  d.yd = out.Jy * sc.state.qd;
  d.ydd = OutputVector::Zero(model.output_dim());
  for (int i = 0; i < model.output_dim(); ++i) {
    d.y[i] += error_scale * g(rng);
    d.yd[i] += error_scale * g(rng);
    d.ydd[i] = error_scale * g(rng);
  }
  sc.errors = output_eval(model, kin, sc.state, d, 0.0, model.nominal_base_height);
  return sc;
}

OutputVector achieved_accel(const RobotModel& model, const Scenario& sc,
                            const ActuatorVector& u) {
  const auto cs = rigid_body::contact_dynamics(model, sc.terms, sc.state.qd, u);
  return sc.errors.jac.Jy * cs.qdd + sc.errors.jac.Jy_dot_qd;
}

class ControllerTest : public ::testing::TestWithParam<const char*> {};

TEST_P(ControllerTest, FlAchievesCommandedAcceleration) {
  const RobotModel model = unlimited(GetParam());
  std::mt19937_64 rng(31);
  const auto gains = GainSet::nominal(model.output_dim());
  for (int trial = 0; trial < 50; ++trial) {
    const Scenario sc = random_scenario(model, rng, 0.05);
    const auto r = fl_controller(model, sc.terms, sc.errors, gains);
    const OutputVector ydd = achieved_accel(model, sc, r.u_unclamped);
    EXPECT_LT((ydd - r.ydd_cmd).norm(), 1e-6 * (1 + r.ydd_cmd.norm()));
  }
}

TEST_P(ControllerTest, RegulationPointGivesZeroAcceleration) {
  const RobotModel model = unlimited(GetParam());
  std::mt19937_64 rng(32);
  const Scenario sc = random_scenario(model, rng, 0.0);
  const auto r = fl_controller(model, sc.terms, sc.errors, GainSet::nominal(model.output_dim()));
  EXPECT_LT(r.ydd_cmd.norm(), 1e-12);
  EXPECT_LT(achieved_accel(model, sc, r.u).norm(), 1e-8);
}

TEST_P(ControllerTest, DoublingKpDoublesPositionResponse) {
  const RobotModel model = unlimited(GetParam());
  std::mt19937_64 rng(33);
  Scenario sc = random_scenario(model, rng, 0.05);
  sc.errors.dy.setZero();
  sc.errors.ydd_d.setZero();
  auto g1 = GainSet::nominal(model.output_dim());
  auto g2 = g1;
  g2.Kp *= 2.0;
  const auto a = commanded_accel(sc.errors, g1);
  const auto b = commanded_accel(sc.errors, g2);
  EXPECT_LT((b - 2.0 * a).norm(), 1e-12);
}

TEST_P(ControllerTest, IdqpMatchesFlAtInteriorPoints) {
  const RobotModel model = unlimited(GetParam());
  std::mt19937_64 rng(34);
  const auto gains = GainSet::nominal(model.output_dim());
  const auto weights = QPWeights::defaults(model.output_dim());
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Scenario sc = random_scenario(model, rng, 0.02);
    const auto fl = fl_controller(model, sc.terms, sc.errors, gains);
    const auto cs = rigid_body::contact_dynamics(model, sc.terms, sc.state.qd, fl.u);
    if (cs.lambda[1] <= 0) continue;  // unilateral bound would be active
    const auto qp = idqp_controller(model, sc.terms, sc.errors, gains, weights);
    worst = std::max(worst, (fl.u - qp.u).norm() / (1 + fl.u.norm()));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST_P(ControllerTest, IdqpSaturatesAtTorqueLimit) {
  const RobotModel model = testing::robot_from_file(GetParam());
  std::mt19937_64 rng(35);
  const Scenario sc = random_scenario(model, rng, 2.0);
  const auto gains = GainSet::high_gain(model.output_dim());
  auto weights = QPWeights::defaults(model.output_dim());
  const auto r = idqp_controller(model, sc.terms, sc.errors, gains, weights);
  int saturated = 0;
  for (int k = 0; k < model.num_actuators(); ++k) {
    EXPECT_LE(std::abs(r.u[k]), model.torque_limits[k] + 1e-9);
    if (std::abs(std::abs(r.u[k]) - model.torque_limits[k]) < 1e-9) ++saturated;
  }
  EXPECT_GT(saturated, 0);
  EXPECT_LT((r.u - r.u_unclamped).norm(), 1e-9);
}

TEST_P(ControllerTest, ZeroWeightOutputIsIgnored) {
  const RobotModel model = unlimited(GetParam());
  std::mt19937_64 rng(36);
  Scenario sc = random_scenario(model, rng, 0.05);
  const auto gains = GainSet::nominal(model.output_dim());
  auto weights = QPWeights::defaults(model.output_dim());
  weights.task[1] = 0.0;
  const auto a = idqp_controller(model, sc.terms, sc.errors, gains, weights);
  sc.errors.y[1] += 0.3;
  sc.errors.dy[1] -= 0.7;
  const auto b = idqp_controller(model, sc.terms, sc.errors, gains, weights);
  EXPECT_LT((a.u - b.u).norm(), 1e-9 * (1 + a.u.norm()));
}

TEST_P(ControllerTest, ControllersAreDeterministic) {
  const RobotModel model = testing::robot_from_file(GetParam());
  std::mt19937_64 rng(37);
  const Scenario sc = random_scenario(model, rng, 0.05);
  TrackingController c{ControllerKind::kIDQP, GainSet::nominal(model.output_dim()),
                       QPWeights::defaults(model.output_dim())};
  EXPECT_EQ(c.compute(model, sc.terms, sc.errors).u, c.compute(model, sc.terms, sc.errors).u);
}

// Largest vertical contact force any torque in the box can produce; lambda is
// affine in u, so the maximum sits at a vertex chosen per coordinate.
double max_normal_force(const RobotModel& model, const Scenario& sc) {
  const ActuatorVector u0 = ActuatorVector::Zero(model.num_actuators());
  const double l0 = rigid_body::contact_dynamics(model, sc.terms, sc.state.qd, u0).lambda[1];
  double best = l0;
  for (int i = 0; i < model.num_actuators(); ++i) {
    ActuatorVector e = u0;
    e[i] = 1.0;
    const double li = rigid_body::contact_dynamics(model, sc.terms, sc.state.qd, e).lambda[1];
    best += std::abs(li - l0) * model.torque_limits[i];
  }
  return best;
}

TEST(IdqpUnilateral, RelaxedOnlyWhenContactCannotHold) {
  const RobotModel model = testing::robot_from_file("rabbit");
  std::mt19937_64 rng(38);
  const auto gains = GainSet::nominal(model.output_dim());
  const auto weights = QPWeights::defaults(model.output_dim());
  Scenario sc = random_scenario(model, rng, 0.05);
  ASSERT_GT(max_normal_force(model, sc), 0.0);
  EXPECT_FALSE(idqp_controller(model, sc.terms, sc.errors, gains, weights).unilateral_relaxed);

  // Spin the torso and swing leg until no admissible torque keeps the foot down.
  const FullState base = sc.state;
  for (double scale = 1.0; scale < 1e3; scale *= 1.5) {
    sc.state = base;
    sc.state.qd *= scale;
    sc.state.qd[2] += scale;
    testing::make_feasible(model, sc.state);
    sc.terms = rigid_body::dynamics_terms(model, sc.state);
    if (max_normal_force(model, sc) < 0.0) break;
  }
  ASSERT_LT(max_normal_force(model, sc), 0.0);
  const auto r = idqp_controller(model, sc.terms, sc.errors, gains, weights);
  EXPECT_TRUE(r.unilateral_relaxed);
  EXPECT_LT((r.u - r.u_unclamped).norm(), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Robots, ControllerTest, ::testing::Values("rabbit", "walker2d"));

TEST(ControllerNames, ParseAndReject) {
  EXPECT_EQ(controller_from_name("fl"), ControllerKind::kFL);
  EXPECT_EQ(controller_from_name("idqp"), ControllerKind::kIDQP);
  EXPECT_THROW(controller_from_name("pd"), InvalidConfig);
  EXPECT_THROW(GainSet::from_name("soft", 4), InvalidConfig);
}

TEST(ClosedLoopTest, FlDecaysOutputErrorOnPinnedRobot) {
  const RobotModel model = testing::robot_from_file("rabbit");
  FullState s = rigid_body::standing_state(model);
  const auto kin0 = rigid_body::forward_kinematics(model, s.q, s.qd);
  const double H0 = model.nominal_base_height;
  const auto target = actual_outputs(model, kin0, s, 0.0, H0).y_a;
  // Offset the desired outputs so that |y(0)| = 0.05 with the swing foot lifted.
  OutputVector offset(4);
  offset << 0.02, -0.02, 0.03, -0.025;
  offset *= 0.05 / offset.norm();
  gait::DesiredOutputs d;
  d.y = target;
  d.y[3] += 0.08;
  d.yd = OutputVector::Zero(4);
  d.ydd = OutputVector::Zero(4);
  // Start exactly on the lifted target, then step the reference by `offset`.
  {
    rigid_body::solve_leg_ik(model, s.swing(),
                             rigid_body::foot_position(model, kin0, s.swing()) + Vec2(0, 0.08),
                             0.0, s.q);
  }
  gait::DesiredOutputs shifted = d;
  shifted.y = d.y + offset;
  rigid_body::StepOptions opts;
  opts.min_swing_time = 1e9;  // pinned, no touchdown
  const auto gains = GainSet::nominal(4);
  double err0 = 0.0, err_end = 0.0;
  for (int tick = 0; tick <= 200; ++tick) {
    const auto terms = rigid_body::dynamics_terms(model, s);
    const auto e = output_eval(model, terms.kin, s, shifted, 0.0, H0);
    if (tick == 0) err0 = e.y.norm();
    if (tick == 200) err_end = e.y.norm();
    const auto r = fl_controller(model, terms, e, gains);
    s = rigid_body::step(model, s, r.u, 1e-3, {}, Vec2::Zero(), opts);
  }
  EXPECT_NEAR(err0, 0.05, 1e-9);
  EXPECT_LT(err_end, 5e-3);
}

}  // namespace
}  // namespace hlloco::tracking
