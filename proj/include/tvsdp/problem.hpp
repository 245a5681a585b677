#ifndef TVSDP_PROBLEM_HPP
#define TVSDP_PROBLEM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tvsdp/types.hpp"

namespace tvsdp {

/// Linear constraint map X -> (<A_1,X>, ..., <A_m,X>) on symmetric matrices,
/// together with its adjoint lambda -> sum_i lambda_i A_i.
class LinearOperator {
 public:
  LinearOperator() = default;
  explicit LinearOperator(std::vector<Matrix> mats);

  int dim() const { return n_; }                              // n
  int count() const { return static_cast<int>(mats_.size()); }  // m
  const Matrix& mat(int i) const { return mats_.at(i); }
  const std::vector<Matrix>& mats() const { return mats_; }

  Vector apply(const Matrix& x) const;
  Matrix adjoint(const Vector& lambda) const;

  /// Smallest singular value of the m x n(n+1)/2 matrix whose rows are the
  /// constraint matrices in the scaled symmetric vectorization (which
  /// preserves Frobenius inner products). Positive means surjective.
  double surjectivity_margin() const;

  /// Operator norm of the map, largest singular value of the same matrix.
  double op_norm() const;

 private:
  int n_ = 0;
  std::vector<Matrix> mats_;
};

enum class ProblemKind { maxcut, synthetic, explicit_affine };

/// A time-varying SDP instance: data (C_t, A, b_t) for t in [0, horizon].
/// The constraint operator is constant in t for all instance kinds built
/// here; objective and right-hand side may vary. Evaluation at a time point
/// is a pure function of the stored data, so repeated calls are bit-identical.
class TVProblem {
 public:
  int dim() const { return n_; }
  int num_constraints() const { return A_.count(); }
  double horizon() const { return horizon_; }
  ProblemKind kind() const { return kind_; }

  const LinearOperator& constraints() const { return A_; }
  Matrix objective(double t) const;  // C_t, exactly symmetric
  Vector rhs(double t) const;        // b_t

  /// Instances built by make_synthetic carry the curve they were reverse
  /// engineered from; it serves as ground truth in tests and diagnostics.
  bool has_known_solution() const { return has_known_solution_; }
  Factor known_factor(double t) const;       // Y_t
  Vector known_multiplier(double t) const;   // lambda_t
  int known_rank() const { return known_rank_; }

  // Generator metadata (used by the JSON round trip).
  std::uint64_t seed() const { return seed_; }
  double density() const { return density_; }

  // Stored affine pieces C_t = C0 + t C1, b_t = b0 + t b1 of non-synthetic
  // kinds; exposed so serialization round-trips bit-exactly.
  const Matrix& objective_base() const { return require_affine(c0_); }
  const Matrix& objective_rate() const { return require_affine(c1_); }
  const Vector& rhs_base() const { return require_affine(b0_); }
  const Vector& rhs_rate() const { return require_affine(b1_); }

  static TVProblem explicit_affine(Matrix c0, Matrix c1, std::vector<Matrix> a_mats,
                                   Vector b0, Vector b1, double horizon);

 private:
  friend TVProblem make_maxcut(int, double, std::uint64_t);
  friend TVProblem make_synthetic(int, int, int, std::uint64_t);

  TVProblem() = default;

  template <typename T>
  const T& require_affine(const T& field) const {
    if (kind_ == ProblemKind::synthetic)
      throw std::logic_error("TVProblem: synthetic instances have no stored affine data");
    return field;
  }

  ProblemKind kind_ = ProblemKind::explicit_affine;
  int n_ = 0;
  double horizon_ = 1.0;
  LinearOperator A_;

  // explicit_affine / maxcut: C_t = C0 + t C1, b_t = b0 + t b1
  Matrix c0_, c1_;
  Vector b0_, b1_;

  // synthetic: C_t = A*(lambda_t) + Z_t with Z_t supported on range(Y_t)^perp
  bool has_known_solution_ = false;
  int known_rank_ = 0;
  Factor y0_, y1_;
  Vector l0_, l1_;
  Vector d_;  // diagonal of the positive definite matrix behind Z_t

  std::uint64_t seed_ = 0;
  double density_ = 0.0;
};

/// Time-varying Max-Cut relaxation: minimize <W_t, X> subject to X_ii = 1,
/// with W_t = W0 + t W1 on [0, 1]. W0 and W1 share one random sparsity
/// pattern with the given density of structurally nonzero off-diagonal
/// entries; present entries are Normal(10, 10) in W0 and Normal(1, 1) in W1.
/// Diagonals are zero and m = n (one diagonal constraint per vertex).
TVProblem make_maxcut(int n, double density, std::uint64_t seed);

/// Synthetic instance with a known solution curve. Builds smooth curves
/// Y_t = Y0 + t Y1 (full column rank on [0,1]) and lambda_t = l0 + t l1, a
/// fixed random surjective constraint operator, b_t = A(Y_t Y_t^T), and
/// C_t = A*(lambda_t) + Z_t where Z_t is positive semidefinite with kernel
/// exactly range(Y_t). The pair (Y_t Y_t^T, Z_t) is then a strictly
/// complementary optimal primal-dual pair at every t, and the instance
/// records (Y_t, lambda_t) as ground truth. Requires r(r+1)/2 <= m <= n(n+1)/2
/// and r < n. Draws are retried deterministically (derived substreams) until
/// the instance passes the rank and non-degeneracy checks.
TVProblem make_synthetic(int n, int r, int m, std::uint64_t seed);

struct NondegeneracyReport {
  bool primal_nondegenerate = false;
  bool strictly_complementary = false;
  /// Singular values of the nr x m matrix with columns vec(A_i Y); the
  /// rank condition sigma_min > tol * sigma_max certifies that
  /// lambda -> A*(lambda) Y is injective.
  Vector primal_singular_values;
  double primal_margin = 0.0;  // sigma_min / sigma_max (0 if m == 0)
  int rank_x = 0;
  int rank_z = 0;
  Vector x_eigenvalues;
  Vector z_eigenvalues;
  bool pass() const { return primal_nondegenerate && strictly_complementary; }
};

/// Numerical check of primal non-degeneracy and strict complementarity for
/// a candidate primal factor Y and dual matrix Z at time t. An eigenvalue or
/// singular value counts as zero when it is <= rel_tol times the largest.
NondegeneracyReport check_nondegeneracy(const TVProblem& problem, double t, const Factor& y,
                                        const Matrix& z, double rel_tol = 1e-8);

// JSON instance format. Generated kinds store only their parameters and are
// regenerated on load, which round-trips exactly because generation is
// deterministic. The explicit kind stores dense data.
std::string problem_to_json(const TVProblem& problem);
TVProblem problem_from_json(const std::string& text);
void write_problem(const TVProblem& problem, const std::string& path);
TVProblem read_problem(const std::string& path);

}  // namespace tvsdp

#endif  // TVSDP_PROBLEM_HPP
