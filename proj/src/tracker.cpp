#include "tvsdp/tracker.hpp"

#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <limits>

#include "tvsdp/geometry.hpp"

namespace tvsdp {

namespace {

double smallest_singular_value(const Matrix& y) {
  Eigen::JacobiSVD<Matrix> svd(y);
  return svd.singularValues().minCoeff();
}

}  // namespace

Trajectory track(const TVProblem& problem, const Factor& y0, const Vector& lambda0,
                 const TrackerConfig& config) {
  config.validate();
  if (y0.rows() != problem.dim())
    throw std::invalid_argument("track: factor dimension does not match the problem");
  if (lambda0.size() != problem.num_constraints())
    throw std::invalid_argument("track: multiplier length does not match the problem");
  const double horizon = problem.horizon();
  const int r = static_cast<int>(y0.cols());

  Trajectory traj;
  traj.rank = r;

  if (r == 0) {
    traj.abort_reason = "initial factor is empty (rank 0)";
    return traj;
  }
  const double sigma0 = smallest_singular_value(y0);
  if (!(sigma0 > 0.0)) {
    traj.abort_reason = "initial factor is rank-deficient";
    return traj;
  }

  traj.records.push_back({0.0, y0, lambda0, SkewMatrix(r),
                          kkt_residual(problem, 0.0, y0, lambda0), 0.0, 0, sigma0, 0.0});

  Factor y = y0;
  Vector lambda = lambda0;
  double t = 0.0;
  double dt = std::min(config.dt0, horizon);
  long accepted = 0;  // fixed-step mode walks the exact grid k * dt0

  while (t < horizon) {
    const auto wall_start = std::chrono::steady_clock::now();
    int retries = 0;
    for (;;) {
      const double remaining = horizon - t;
      double t_next;
      if (config.stepsize_tuning) {
        t_next = (dt >= remaining) ? horizon : t + dt;
      } else {
        t_next = std::min(horizon, dt * static_cast<double>(accepted + 1));
      }
      if (!(t_next > t)) {
        traj.abort_reason = "stepsize underflow at t = " + std::to_string(t);
        return traj;
      }
      const StepResult step = solve_kkt_step(problem, t_next, y, lambda);
      double res = std::numeric_limits<double>::infinity();
      Factor y_cand;
      Vector lambda_cand;
      if (step.ok) {
        y_cand = y + step.delta_y;
        lambda_cand = step.lambda_new;
        res = kkt_residual(problem, t_next, y_cand, lambda_cand);
      }

      const bool reject =
          !step.ok || (config.stepsize_tuning && !(res <= config.residual_tol));
      if (reject) {
        if (!config.stepsize_tuning && !step.ok) {
          traj.abort_reason = "linear system singular or ill-conditioned (rcond " +
                              std::to_string(step.rcond) + ") at t = " + std::to_string(t_next);
          return traj;
        }
        if (++retries > config.max_retries) {
          traj.abort_reason = "retry budget exhausted at t = " + std::to_string(t) +
                              " (stepsize underflow, dt = " + std::to_string(dt) + ")";
          return traj;
        }
        dt *= config.gamma1;
        continue;
      }

      const double sigma = smallest_singular_value(y_cand);
      if (!(sigma > 0.0)) {
        traj.abort_reason = "factor lost rank at t = " + std::to_string(t_next);
        return traj;
      }

      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
      traj.records.push_back({t_next, y_cand, lambda_cand, step.mu_new, res, t_next - t,
                              retries, sigma, wall});
      y = std::move(y_cand);
      lambda = std::move(lambda_cand);
      t = t_next;
      ++accepted;
      if (config.stepsize_tuning) dt = std::min(horizon - t, config.gamma2 * dt);
      break;
    }
  }
  traj.completed = true;
  return traj;
}

std::vector<Matrix> reconstruct_primal(const Trajectory& trajectory) {
  std::vector<Matrix> xs;
  xs.reserve(trajectory.records.size());
  for (const auto& rec : trajectory.records) xs.push_back(phi(rec.Y));
  return xs;
}

StepConditionReport check_step_conditions(const StepConditionInputs& in) {
  if (!(in.delta > 0.0) || !(in.dt > 0.0) || !(in.lambda_star > 0.0) || !(in.Lambda_star > 0.0) ||
      !(in.L > 0.0) || !(in.K > 0.0) || !(in.m > 0.0) || !(in.M > 0.0) || in.r < 1)
    throw std::invalid_argument("check_step_conditions: all inputs must be positive");

  StepConditionReport rep;
  rep.in = in;
  const double sqrt_r = std::sqrt(static_cast<double>(in.r));
  const double sqrt_r4 = std::sqrt(static_cast<double>(in.r) + 4.0);
  const double drift = (2.0 * std::sqrt(in.Lambda_star) + in.delta) * in.delta;  // primal error growth

  rep.lhs1 = drift + in.L * in.dt;
  rep.rhs1 = 2.0 * in.lambda_star / (sqrt_r4 + sqrt_r);
  rep.cond1 = rep.lhs1 < rep.rhs1;

  rep.lhs2 = in.delta;
  rep.rhs2 = (2.0 / 3.0) * (in.m / in.M);
  rep.cond2 = rep.lhs2 < rep.rhs2;

  const double bracket = (rep.lhs1 * rep.lhs1) / in.lambda_star + sqrt_r * drift + in.L * in.dt;
  const double dual_drift = in.delta + in.K * in.dt;
  rep.lhs3 = bracket * bracket + dual_drift * dual_drift;
  rep.rhs3 = (2.0 / 3.0) * (in.m / in.M) * in.delta;
  rep.cond3 = rep.lhs3 <= rep.rhs3;

  rep.init_multiplier_bound = in.delta / std::sqrt(2.0);
  const double rl2 = static_cast<double>(in.r) * in.lambda_star * in.lambda_star;
  rep.init_primal_bound =
      0.5 * (std::sqrt(rl2 + 2.0 * std::sqrt(2.0) * in.delta * in.lambda_star) - std::sqrt(rl2));
  return rep;
}

}  // namespace tvsdp
