#ifndef TVSDP_INITIALIZER_HPP
#define TVSDP_INITIALIZER_HPP

#include "tvsdp/problem.hpp"
#include "tvsdp/types.hpp"

namespace tvsdp {

struct RankDetection {
  int rank = 0;
  Factor Y;                      // top-rank factor U_r diag(sqrt(lambda_i))
  Vector eigenvalues;            // ascending, as computed
  double truncation_bound = 0.0; // (n - r) * lambda_{r+1}, bounds ||X - Y Y^T||_F
};

/// Rank of a PSD matrix with the relative threshold lambda_i > rel_tol *
/// lambda_max, together with the rank-revealing factor. Throws if X has an
/// eigenvalue below -rel_tol * lambda_max. X = 0 yields rank 0 and an empty
/// factor.
RankDetection detect_rank(const Matrix& x, double rel_tol = 1e-8);

struct InitOptions {
  double tol = 1e-9;         // feasibility / relative-gap target
  int max_iterations = 200;
  double rank_rel_tol = 1e-8;
  int polish_iterations = 8; // Newton refinements of the factorized point
};

struct InitResult {
  Matrix X0;
  Vector lambda0;
  Factor Y0;
  int rank = 0;
  double residual0 = 0.0;     // inf-norm residual of (Y0, lambda0) at the solve time
  int iterations = 0;         // interior-point iterations
  double rel_gap = 0.0;
  double primal_infeas = 0.0;
  double dual_infeas = 0.0;
  bool converged = false;
};

/// Solves the stationary primal-dual pair at a fixed time with a dense
/// infeasible-start interior-point method (predictor-corrector with
/// Mehrotra centering), detects the solution rank, and polishes the
/// factorized point with a few Newton steps on the horizontally constrained
/// KKT system at the same time point. Throws when neither the interior-point
/// tolerances nor the residual contract can be met.
InitResult solve_fixed_time(const TVProblem& problem, double t, const InitOptions& options = {});

}  // namespace tvsdp

#endif  // TVSDP_INITIALIZER_HPP
