#ifndef TVSDP_KKT_HPP
#define TVSDP_KKT_HPP

#include "tvsdp/problem.hpp"
#include "tvsdp/types.hpp"

namespace tvsdp {

/// Max component-wise violation of the factorized optimality conditions at
/// time t: inf-norm over all entries of the stacked blocks
/// ( 2 [C_t - A*(lambda)] Y ; A(Y Y^T) - b_t ).
double kkt_residual(const TVProblem& problem, double t, const Factor& y, const Vector& lambda);

/// Frobenius-norm variant of the same stacked residual. Unlike the inf-norm
/// it is exactly invariant under Y -> Y Q.
double kkt_residual_fro(const TVProblem& problem, double t, const Factor& y, const Vector& lambda);

/// Stacked first-order map of the horizontally constrained problem anchored
/// at Y_t and evaluated at time s:
///   ( 2 C_s Y - 2 A*(lambda) Y - 2 Y_t mu ; A(Y Y^T) - b_s ; h(Y) )
/// with h(Y) = Y_t^T Y - Y^T Y_t expressed in the Frobenius-orthonormal skew
/// coordinates, matching the row space of assemble_kkt.
Vector kkt_map(const TVProblem& problem, const Factor& anchor, double s, const KKTPoint& point);

/// The symmetric saddle-point system of one predictor-corrector step.
/// Unknown ordering: (vec(DeltaY), lambda_new, skew coordinates of mu_new);
/// the multipliers are solved for in full, not as increments.
struct KKTSystem {
  Matrix k;    // symmetric, dimension n r + m + r(r-1)/2
  Vector rhs;  // ( -2 C_s Y_t ; A(Y_t Y_t^T) - b_s ; 0 )
  int n = 0, r = 0, m = 0;
  int dim() const { return n * r + m + SkewMatrix::coord_dim(r); }
  int lambda_offset() const { return n * r; }
  int mu_offset() const { return n * r + m; }
};

/// Builds the linearized KKT system anchored at (Y_t, lambda_t) for the
/// advanced time s. The matrix is symmetric by construction (lower blocks
/// are the transposes of the upper ones).
KKTSystem assemble_kkt(const TVProblem& problem, const Factor& y_t, const Vector& lambda_t, double s);

struct StepResult {
  bool ok = false;       // false when the system was singular or too ill-conditioned
  Matrix delta_y;        // horizontal update of the factor
  Vector lambda_new;     // full new equality multipliers
  SkewMatrix mu_new;     // full new skew multiplier (diagnostic; re-zeroed each step)
  double rcond = 0.0;    // reciprocal condition estimate of the factorization
};

/// Solves one step system with data (t_next, Y_t, lambda_t). A reciprocal
/// condition estimate below rcond_min signals failure instead of returning a
/// garbage direction, so the caller can shrink the stepsize.
StepResult solve_kkt_step(const TVProblem& problem, double t_next, const Factor& y_t,
                          const Vector& lambda_t, double rcond_min = 1e-14);

struct SecondOrderReport {
  double min_eigenvalue = 0.0;  // smallest eigenvalue of the reduced Hessian
  int subspace_dim = 0;         // dim of {H : g'(H) = 0, h(H) = 0}
  int constraint_rank = 0;
  bool positive = false;        // certifies invertibility of the step system at dt = 0
};

/// Projects the Hessian form H -> 2 trace(H^T (C_t - A*(lambda)) H) onto the
/// intersection of the linearized constraint kernels and reports its
/// smallest eigenvalue.
SecondOrderReport check_second_order(const TVProblem& problem, double t, const Factor& y,
                                     const Vector& lambda, double rank_tol = 1e-10);

}  // namespace tvsdp

#endif  // TVSDP_KKT_HPP
