#ifndef TVSDP_TRACKER_HPP
#define TVSDP_TRACKER_HPP

#include <string>
#include <vector>

#include "tvsdp/kkt.hpp"
#include "tvsdp/problem.hpp"

namespace tvsdp {

struct TrackerConfig {
  double dt0 = 1e-2;            // initial stepsize (time units)
  bool stepsize_tuning = false;
  double gamma1 = 0.5;          // shrink factor, in (0, 1)
  double gamma2 = 1.2;          // growth factor, > 1
  double residual_tol = 1e-4;   // acceptance threshold when tuning is on
  int max_retries = 60;         // shrink attempts per step before aborting

  void validate() const {
    if (!(dt0 > 0.0)) throw std::invalid_argument("TrackerConfig: dt0 must be positive");
    if (!(gamma1 > 0.0 && gamma1 < 1.0))
      throw std::invalid_argument("TrackerConfig: gamma1 must be in (0,1)");
    if (!(gamma2 > 1.0)) throw std::invalid_argument("TrackerConfig: gamma2 must be > 1");
    if (!(residual_tol > 0.0)) throw std::invalid_argument("TrackerConfig: residual tolerance must be positive");
    if (max_retries < 1) throw std::invalid_argument("TrackerConfig: max_retries must be positive");
  }
};

struct TrajectoryRecord {
  double t = 0.0;
  Factor Y;
  Vector lambda;
  SkewMatrix mu;          // diagnostic only; the loop re-zeroes mu each step
  double residual = 0.0;  // inf-norm residual at (t, Y, lambda)
  double dt_used = 0.0;   // 0 for the initial record
  int retries = 0;
  double sigma_r = 0.0;   // smallest singular value of Y
  double wall_seconds = 0.0;  // excluded from determinism guarantees
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  bool completed = false;      // reached the horizon
  std::string abort_reason;    // empty when completed
  int rank = 0;
};

/// Path-following predictor-corrector loop. Starting from (Y0, lambda0) at
/// t = 0, repeatedly solves the linearized KKT system at the advanced time
/// and accepts the candidate, shrinking the stepsize by gamma1 on rejection
/// (residual above tolerance, or a singular system) when tuning is enabled
/// and growing it by gamma2 after acceptance. Without tuning the stepsize
/// stays constant except for the final clamp to hit the horizon exactly.
/// Identical inputs produce bit-identical trajectories (wall times aside).
Trajectory track(const TVProblem& problem, const Factor& y0, const Vector& lambda0,
                 const TrackerConfig& config);

/// X_k = Y_k Y_k^T for every record.
std::vector<Matrix> reconstruct_primal(const Trajectory& trajectory);

/// Inputs of the three stepsize/initialization conditions. m bounds the
/// inverse of the step Jacobian from below (||J^-1|| <= 1/m) and M is the
/// Lipschitz constant of the Jacobian; neither is computed by this library.
struct StepConditionInputs {
  double delta = 0.0;        // tracking-error budget
  double dt = 0.0;           // stepsize
  double lambda_star = 0.0;  // lower bound on the smallest positive eigenvalue of X_t
  double Lambda_star = 0.0;  // upper bound on the largest eigenvalue of X_t
  double L = 0.0;            // bound on ||dX_t/dt||_F
  double K = 0.0;            // bound on ||d lambda_t/dt||
  double m = 0.0;
  double M = 0.0;
  int r = 0;
};

struct StepConditionReport {
  StepConditionInputs in;
  bool cond1 = false, cond2 = false, cond3 = false;
  double lhs1 = 0.0, rhs1 = 0.0;
  double lhs2 = 0.0, rhs2 = 0.0;
  double lhs3 = 0.0, rhs3 = 0.0;
  // Sufficient initialization bounds implied by delta:
  double init_multiplier_bound = 0.0;  // ||lambda_hat_0 - lambda_0|| <= delta / sqrt(2)
  double init_primal_bound = 0.0;      // ||X_hat_0 - X_0||_F bound
  bool all() const { return cond1 && cond2 && cond3; }
};

/// Evaluates the three sufficient conditions for the tracking loop to keep
/// its iterates within distance delta of the solution curve, verbatim:
///   1. (2 sqrt(Lambda*) + delta) delta + L dt < 2 lambda* / (sqrt(r+4)+sqrt(r))
///   2. delta < (2/3) (m/M)
///   3. [ (1/lambda*) ((2 sqrt(Lambda*)+delta) delta + L dt)^2
///        + sqrt(r) (2 sqrt(Lambda*)+delta) delta + L dt ]^2
///      + (delta + K dt)^2  <=  (2/3) (m/M) delta
StepConditionReport check_step_conditions(const StepConditionInputs& in);

}  // namespace tvsdp

#endif  // TVSDP_TRACKER_HPP
