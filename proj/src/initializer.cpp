#include "tvsdp/initializer.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "tvsdp/geometry.hpp"
#include "tvsdp/kkt.hpp"

namespace tvsdp {

RankDetection detect_rank(const Matrix& x, double rel_tol) {
  if (x.rows() != x.cols()) throw std::invalid_argument("detect_rank: matrix must be square");
  const int n = static_cast<int>(x.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(x));
  const Vector& e = es.eigenvalues();  // ascending
  const double emax = e[n - 1];
  if (emax < 0.0 || e[0] < -rel_tol * std::max(emax, 0.0))
    throw std::invalid_argument("detect_rank: matrix has a negative eigenvalue beyond tolerance");

  RankDetection out;
  out.eigenvalues = e;
  if (emax <= 0.0) {
    out.Y = Matrix(n, 0);
    return out;
  }
  int r = 0;
  for (int i = 0; i < n; ++i)
    if (e[i] > rel_tol * emax) ++r;
  out.rank = r;
  out.Y = Matrix(n, r);
  for (int k = 0; k < r; ++k)
    out.Y.col(k) = es.eigenvectors().col(n - 1 - k) * std::sqrt(std::max(0.0, e[n - 1 - k]));
  out.truncation_bound = (r < n) ? (n - r) * std::max(0.0, e[n - r - 1]) : 0.0;
  return out;
}

namespace {

// Largest alpha with S + alpha dS still PSD (infinity when dS does not push
// against the cone), computed through the Cholesky factor of S.
double max_psd_step(const Eigen::LLT<Matrix>& llt, const Matrix& ds) {
  Matrix w = llt.matrixL().solve(ds);
  w = llt.matrixL().solve(w.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(w));
  const double lambda_min = es.eigenvalues().minCoeff();
  if (lambda_min >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lambda_min;
}

struct Direction {
  Matrix dx, dz;
  Vector dlambda;
};

}  // namespace

InitResult solve_fixed_time(const TVProblem& problem, double t, const InitOptions& options) {
  const int n = problem.dim();
  const int m = problem.num_constraints();
  const LinearOperator& a = problem.constraints();
  const Matrix c = problem.objective(t);
  const Vector b = problem.rhs(t);

  // Canonical diagonal structure (A_i = e_i e_i^T) admits a Hadamard-product
  // Schur complement; everything else goes through the generic assembly.
  bool diag_structure = (m == n);
  for (int i = 0; diag_structure && i < m; ++i) {
    Matrix probe = Matrix::Zero(n, n);
    probe(i, i) = 1.0;
    diag_structure = (a.mat(i) - probe).cwiseAbs().maxCoeff() == 0.0;
  }

  const double b_scale = std::max(1.0, b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
  const double c_scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  Matrix x = b_scale * Matrix::Identity(n, n);
  Matrix z = c_scale * Matrix::Identity(n, n);
  Vector lambda = Vector::Zero(m);

  InitResult result;
  bool ipm_converged = false;
  int iter = 0;
  const double tau = 0.98;  // fraction-to-boundary

  for (; iter < options.max_iterations; ++iter) {
    const Vector rp = b - a.apply(x);
    const Matrix rd = c - a.adjoint(lambda) - z;
    const double gap = x.cwiseProduct(z).sum();
    const double mu = gap / n;
    const double pobj = c.cwiseProduct(x).sum();
    const double dobj = b.dot(lambda);

    result.primal_infeas = rp.cwiseAbs().maxCoeff() / b_scale;
    result.dual_infeas = rd.cwiseAbs().maxCoeff() / c_scale;
    result.rel_gap = std::abs(gap) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (result.primal_infeas <= options.tol && result.dual_infeas <= options.tol &&
        result.rel_gap <= options.tol) {
      ipm_converged = true;
      break;
    }

    Eigen::LLT<Matrix> llt_z(z);
    Eigen::LLT<Matrix> llt_x(x);
    if (llt_z.info() != Eigen::Success || llt_x.info() != Eigen::Success) break;
    const Matrix zi = llt_z.solve(Matrix::Identity(n, n));

    Matrix schur(m, m);
    if (diag_structure) {
      schur = x.cwiseProduct(zi);
    } else {
      for (int j = 0; j < m; ++j) {
        const Matrix tj = x * (a.mat(j) * zi);
        for (int i = 0; i < m; ++i) schur(i, j) = a.mat(i).cwiseProduct(tj).sum();
      }
      schur = symmetrize(schur);
    }
    Eigen::LDLT<Matrix> schur_fact(schur);
    if (schur_fact.info() != Eigen::Success) break;

    const Matrix x_rd_zi = x * rd * zi;
    const auto solve_direction = [&](const Matrix& r_c) {
      Direction d;
      const Matrix g = r_c * zi;
      const Vector rhs = rp - a.apply(g) + a.apply(x_rd_zi);
      d.dlambda = schur_fact.solve(rhs);
      d.dz = rd - a.adjoint(d.dlambda);
      d.dx = symmetrize(g - x * d.dz * zi);
      return d;
    };

    // Predictor: pure Newton step toward complementarity zero.
    const Direction aff = solve_direction(-x * z);
    const double ap_aff = std::min(1.0, max_psd_step(llt_x, aff.dx));
    const double ad_aff = std::min(1.0, max_psd_step(llt_z, aff.dz));
    const double mu_aff =
        (x + ap_aff * aff.dx).cwiseProduct(z + ad_aff * aff.dz).sum() / n;
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
    sigma = std::min(1.0, std::max(1e-12, sigma));

    // Corrector with Mehrotra's second-order term.
    const Matrix r_c = sigma * mu * Matrix::Identity(n, n) - x * z - aff.dx * aff.dz;
    const Direction dir = solve_direction(r_c);
    const double ap = std::min(1.0, tau * max_psd_step(llt_x, dir.dx));
    const double ad = std::min(1.0, tau * max_psd_step(llt_z, dir.dz));

    x = symmetrize(x + ap * dir.dx);
    z = symmetrize(z + ad * dir.dz);
    lambda += ad * dir.dlambda;

    if (!(x.allFinite() && z.allFinite() && lambda.allFinite()))
      throw std::runtime_error("solve_fixed_time: iteration diverged (infeasible instance?)");
  }
  result.iterations = iter;

  const RankDetection rd = detect_rank(x, options.rank_rel_tol);
  result.rank = rd.rank;
  Factor y = rd.Y;

  if (rd.rank > 0) {
    // Newton polish of the factorized point at the same time: each pass is
    // one step of the horizontally constrained KKT system with dt = 0.
    double res = kkt_residual(problem, t, y, lambda);
    for (int k = 0; k < options.polish_iterations; ++k) {
      if (res <= 1e-14 * c_scale) break;
      const StepResult step = solve_kkt_step(problem, t, y, lambda);
      if (!step.ok) break;
      const Factor y_new = y + step.delta_y;
      const Vector lambda_new = step.lambda_new;
      const double res_new = kkt_residual(problem, t, y_new, lambda_new);
      if (!(res_new < res)) break;
      y = y_new;
      lambda = lambda_new;
      res = res_new;
    }
    result.residual0 = res;
    result.X0 = phi(y);
  } else {
    result.residual0 = b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0;
    result.X0 = Matrix::Zero(n, n);
  }
  result.Y0 = std::move(y);
  result.lambda0 = std::move(lambda);
  result.converged = ipm_converged || result.residual0 <= options.tol;
  if (!result.converged)
    throw std::runtime_error("solve_fixed_time: no convergence within the iteration cap");
  return result;
}

}  // namespace tvsdp
