#include "tvsdp/kkt.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "tvsdp/rng.hpp"

namespace tvsdp {

namespace {

Vector flatten(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix stationarity_block(const TVProblem& problem, double t, const Factor& y, const Vector& lambda) {
  return 2.0 * (problem.objective(t) - problem.constraints().adjoint(lambda)) * y;
}

}  // namespace

double kkt_residual(const TVProblem& problem, double t, const Factor& y, const Vector& lambda) {
  const Matrix grad = stationarity_block(problem, t, y, lambda);
  const Vector gap = problem.constraints().apply(y * y.transpose()) - problem.rhs(t);
  const double grad_max = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
  return std::max(grad_max, gap.cwiseAbs().maxCoeff());
}

double kkt_residual_fro(const TVProblem& problem, double t, const Factor& y, const Vector& lambda) {
  const Matrix grad = stationarity_block(problem, t, y, lambda);
  const Vector gap = problem.constraints().apply(y * y.transpose()) - problem.rhs(t);
  return std::sqrt(grad.squaredNorm() + gap.squaredNorm());
}

Vector kkt_map(const TVProblem& problem, const Factor& anchor, double s, const KKTPoint& point) {
  const int n = problem.dim();
  const int r = static_cast<int>(point.Y.cols());
  const int m = problem.num_constraints();
  const int p = SkewMatrix::coord_dim(r);

  Vector f(n * r + m + p);
  const Matrix grad = stationarity_block(problem, s, point.Y, point.lambda) -
                      2.0 * anchor * point.mu.to_matrix();
  f.head(n * r) = flatten(grad);
  f.segment(n * r, m) = problem.constraints().apply(point.Y * point.Y.transpose()) - problem.rhs(s);
  const Matrix h = anchor.transpose() * point.Y - point.Y.transpose() * anchor;
  f.tail(p) = SkewMatrix::from_matrix(h).orthonormal_coords();
  return f;
}

KKTSystem assemble_kkt(const TVProblem& problem, const Factor& y_t, const Vector& lambda_t, double s) {
  const int n = problem.dim();
  const int r = static_cast<int>(y_t.cols());
  const int m = problem.num_constraints();
  const int p = SkewMatrix::coord_dim(r);
  const int nr = n * r;
  const int dim = nr + m + p;

  KKTSystem sys;
  sys.n = n;
  sys.r = r;
  sys.m = m;
  sys.k = Matrix::Zero(dim, dim);
  sys.rhs = Vector::Zero(dim);

  // Hessian block: H -> 2 (C_s - A*(lambda_t)) H, i.e. kron(I_r, 2 W) for
  // column-major vec. W is exactly symmetric, so the block is too.
  const Matrix w = 2.0 * (problem.objective(s) - problem.constraints().adjoint(lambda_t));
  for (int j = 0; j < r; ++j) sys.k.block(n * j, n * j, n, n) = w;

  // Multiplier block: column i is vec(-2 A_i Y_t).
  for (int i = 0; i < m; ++i) {
    const Matrix ay = -2.0 * (problem.constraints().mat(i) * y_t);
    sys.k.block(0, nr + i, nr, 1) = flatten(ay);
  }

  // Horizontal-constraint block in the orthonormal skew basis
  // E_ij = (e_i e_j^T - e_j e_i^T)/sqrt(2): column k is vec(-2 Y_t E_ij).
  {
    const double c = std::sqrt(2.0);
    int k = 0;
    for (int j = 0; j < r; ++j)
      for (int i = j + 1; i < r; ++i, ++k) {
        sys.k.block(n * j, nr + m + k, n, 1) = -c * y_t.col(i);
        sys.k.block(n * i, nr + m + k, n, 1) = c * y_t.col(j);
      }
  }

  // Mirror the off-diagonal blocks; the saddle-point corners stay zero.
  sys.k.block(nr, 0, m + p, nr) = sys.k.block(0, nr, nr, m + p).transpose();

  sys.rhs.head(nr) = flatten(Matrix(-2.0 * problem.objective(s) * y_t));
  sys.rhs.segment(nr, m) =
      problem.constraints().apply(y_t * y_t.transpose()) - problem.rhs(s);
  return sys;
}

StepResult solve_kkt_step(const TVProblem& problem, double t_next, const Factor& y_t,
                          const Vector& lambda_t, double rcond_min) {
  const KKTSystem sys = assemble_kkt(problem, y_t, lambda_t, t_next);
  Eigen::PartialPivLU<Matrix> lu(sys.k);

  StepResult out;
  // The 1-norm condition estimate alone can miss an exactly singular system
  // when the right-hand side happens to be consistent (e.g. duplicated
  // constraints). A solve against a fixed pseudo-random probe blows up in
  // that case and tightens the estimate; the probe is deterministic, so
  // trajectories stay bit-reproducible.
  double rcond = lu.rcond();
  Rng probe_rng(0x7C0FFEEull, static_cast<std::uint64_t>(sys.dim()));
  Vector probe(sys.dim());
  for (int i = 0; i < sys.dim(); ++i) probe[i] = 2.0 * probe_rng.uniform() - 1.0;
  const Vector amplified = lu.solve(probe);
  if (amplified.allFinite()) {
    const double growth = amplified.cwiseAbs().maxCoeff() / probe.cwiseAbs().maxCoeff();
    const double k_norm = sys.k.cwiseAbs().rowwise().sum().maxCoeff();
    if (growth > 0.0) rcond = std::min(rcond, 1.0 / (k_norm * growth));
  } else {
    rcond = 0.0;
  }
  out.rcond = rcond;
  if (!std::isfinite(out.rcond) || out.rcond < rcond_min) return out;
  const Vector sol = lu.solve(sys.rhs);
  if (!sol.allFinite()) return out;

  const int nr = sys.n * sys.r;
  out.delta_y = Eigen::Map<const Matrix>(sol.data(), sys.n, sys.r);
  out.lambda_new = sol.segment(nr, sys.m);
  out.mu_new =
      SkewMatrix::from_orthonormal_coords(sys.r, sol.tail(SkewMatrix::coord_dim(sys.r)));
  out.ok = true;
  return out;
}

SecondOrderReport check_second_order(const TVProblem& problem, double t, const Factor& y,
                                     const Vector& lambda, double rank_tol) {
  const int n = problem.dim();
  const int r = static_cast<int>(y.cols());
  const int m = problem.num_constraints();
  const int p = SkewMatrix::coord_dim(r);
  const int nr = n * r;

  // Rows span the linearized constraints: g'(H)_i = 2 <A_i Y, H> and the
  // horizontal conditions <E_ij, Y^T H - H^T Y> = 0.
  Matrix constraints(m + p, nr);
  for (int i = 0; i < m; ++i) {
    const Matrix ay = 2.0 * (problem.constraints().mat(i) * y);
    constraints.row(i) = flatten(ay).transpose();
  }
  {
    const double c = std::sqrt(2.0);
    int k = 0;
    for (int j = 0; j < r; ++j)
      for (int i = j + 1; i < r; ++i, ++k) {
        Matrix row = Matrix::Zero(n, r);
        row.col(j) = c * y.col(i);
        row.col(i) = -c * y.col(j);
        constraints.row(m + k) = flatten(row).transpose();
      }
  }

  Eigen::JacobiSVD<Matrix> svd(constraints, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rank_tol * std::max(1.0, smax)) ++rank;

  SecondOrderReport report;
  report.constraint_rank = rank;
  report.subspace_dim = nr - rank;
  if (report.subspace_dim == 0) {
    report.positive = true;  // vacuous: no feasible directions left
    report.min_eigenvalue = std::numeric_limits<double>::infinity();
    return report;
  }

  const Matrix kernel = svd.matrixV().rightCols(report.subspace_dim);
  const Matrix w = 2.0 * (problem.objective(t) - problem.constraints().adjoint(lambda));
  Matrix reduced(report.subspace_dim, report.subspace_dim);
  // kron(I_r, W) applied to the kernel basis, done blockwise.
  Matrix wk(nr, report.subspace_dim);
  for (int c = 0; c < report.subspace_dim; ++c) {
    const Eigen::Map<const Matrix> h(kernel.col(c).data(), n, r);
    Matrix tmp = w * h;
    wk.col(c) = flatten(tmp);
  }
  reduced = kernel.transpose() * wk;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(reduced));
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  report.positive = report.min_eigenvalue > 0.0;
  return report;
}

}  // namespace tvsdp
