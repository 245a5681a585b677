#include "tvsdp/problem.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <utility>

#include "tvsdp/rng.hpp"

namespace tvsdp {

namespace {

// Scaled symmetric vectorization: packs the upper triangle with off-diagonal
// entries multiplied by sqrt(2), so Euclidean inner products of svecs equal
// Frobenius inner products of the matrices.
Vector svec(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  Vector v(n * (n + 1) / 2);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) v[k++] = (i == j) ? x(i, j) : std::sqrt(2.0) * x(i, j);
  return v;
}

Matrix constraint_svec_matrix(const std::vector<Matrix>& mats) {
  const int n = mats.empty() ? 0 : static_cast<int>(mats[0].rows());
  Matrix s(static_cast<int>(mats.size()), n * (n + 1) / 2);
  for (std::size_t i = 0; i < mats.size(); ++i) s.row(static_cast<int>(i)) = svec(mats[i]).transpose();
  return s;
}

}  // namespace

LinearOperator::LinearOperator(std::vector<Matrix> mats) : mats_(std::move(mats)) {
  if (mats_.empty()) throw std::invalid_argument("LinearOperator: needs at least one matrix");
  n_ = static_cast<int>(mats_[0].rows());
  for (auto& a : mats_) {
    if (a.rows() != n_ || a.cols() != n_)
      throw std::invalid_argument("LinearOperator: constraint matrices must be square of equal size");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (symmetry_error(a) > 1e-10 * scale)
      throw std::invalid_argument("LinearOperator: constraint matrices must be symmetric");
    a = symmetrize(a);
  }
}

Vector LinearOperator::apply(const Matrix& x) const {
  if (x.rows() != n_ || x.cols() != n_)
    throw std::invalid_argument("LinearOperator::apply: dimension mismatch");
  Vector v(count());
  for (int i = 0; i < count(); ++i) v[i] = mats_[static_cast<std::size_t>(i)].cwiseProduct(x).sum();
  return v;
}

Matrix LinearOperator::adjoint(const Vector& lambda) const {
  if (lambda.size() != count())
    throw std::invalid_argument("LinearOperator::adjoint: multiplier length mismatch");
  Matrix z = Matrix::Zero(n_, n_);
  for (int i = 0; i < count(); ++i) z += lambda[i] * mats_[static_cast<std::size_t>(i)];
  return z;
}

double LinearOperator::surjectivity_margin() const {
  Eigen::JacobiSVD<Matrix> svd(constraint_svec_matrix(mats_));
  return svd.singularValues().size() == count() ? svd.singularValues().minCoeff() : 0.0;
}

double LinearOperator::op_norm() const {
  Eigen::JacobiSVD<Matrix> svd(constraint_svec_matrix(mats_));
  return svd.singularValues().maxCoeff();
}

Matrix TVProblem::objective(double t) const {
  if (kind_ != ProblemKind::synthetic) return c0_ + t * c1_;
  const Factor y = known_factor(t);
  const Vector lambda = known_multiplier(t);
  // Orthogonal projector onto range(Y_t)^perp, written basis-free so it is a
  // smooth function of t.
  const Matrix gram = y.transpose() * y;
  const Matrix p_perp = Matrix::Identity(n_, n_) - y * gram.llt().solve(y.transpose());
  const Matrix z = p_perp * d_.asDiagonal() * p_perp;
  return symmetrize(A_.adjoint(lambda) + z);
}

Vector TVProblem::rhs(double t) const {
  if (kind_ != ProblemKind::synthetic) return b0_ + t * b1_;
  const Factor y = known_factor(t);
  return A_.apply(y * y.transpose());
}

Factor TVProblem::known_factor(double t) const {
  if (!has_known_solution_) throw std::logic_error("TVProblem: no known solution curve");
  return y0_ + t * y1_;
}

Vector TVProblem::known_multiplier(double t) const {
  if (!has_known_solution_) throw std::logic_error("TVProblem: no known solution curve");
  return l0_ + t * l1_;
}

TVProblem TVProblem::explicit_affine(Matrix c0, Matrix c1, std::vector<Matrix> a_mats, Vector b0,
                                     Vector b1, double horizon) {
  if (horizon <= 0.0) throw std::invalid_argument("TVProblem: horizon must be positive");
  TVProblem p;
  p.kind_ = ProblemKind::explicit_affine;
  p.A_ = LinearOperator(std::move(a_mats));
  p.n_ = p.A_.dim();
  if (c0.rows() != p.n_ || c0.cols() != p.n_ || c1.rows() != p.n_ || c1.cols() != p.n_)
    throw std::invalid_argument("TVProblem: objective dimension mismatch");
  if (b0.size() != p.A_.count() || b1.size() != p.A_.count())
    throw std::invalid_argument("TVProblem: rhs length mismatch");
  p.c0_ = symmetrize(c0);
  p.c1_ = symmetrize(c1);
  p.b0_ = std::move(b0);
  p.b1_ = std::move(b1);
  p.horizon_ = horizon;
  return p;
}

TVProblem make_maxcut(int n, double density, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("make_maxcut: n must be at least 2");
  if (!(density > 0.0) || density > 1.0)
    throw std::invalid_argument("make_maxcut: density must be in (0, 1]");

  Rng pattern_rng(seed, 0), w0_rng(seed, 1), w1_rng(seed, 2);
  Matrix w0 = Matrix::Zero(n, n), w1 = Matrix::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (pattern_rng.uniform() >= density) continue;
      const double v0 = w0_rng.normal(10.0, 10.0);
      const double v1 = w1_rng.normal(1.0, 1.0);
      w0(i, j) = w0(j, i) = v0;
      w1(i, j) = w1(j, i) = v1;
    }
  }

  std::vector<Matrix> diag_mats;
  diag_mats.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Matrix a = Matrix::Zero(n, n);
    a(i, i) = 1.0;
    diag_mats.push_back(std::move(a));
  }

  TVProblem p;
  p.kind_ = ProblemKind::maxcut;
  p.n_ = n;
  p.horizon_ = 1.0;
  p.A_ = LinearOperator(std::move(diag_mats));
  p.c0_ = std::move(w0);
  p.c1_ = std::move(w1);
  p.b0_ = Vector::Ones(n);
  p.b1_ = Vector::Zero(n);
  p.seed_ = seed;
  p.density_ = density;
  return p;
}

namespace {

// Certified lower bound on min_t sigma_r(Y0 + t Y1) over [0,1]: grid values
// minus the Lipschitz slack ||Y1||_2 * half-spacing.
double min_sigma_r_on_curve(const Matrix& y0, const Matrix& y1) {
  const int grid = 20;
  double min_sigma = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double t = static_cast<double>(k) / grid;
    Eigen::JacobiSVD<Matrix> svd(y0 + t * y1);
    min_sigma = std::min(min_sigma, svd.singularValues().minCoeff());
  }
  Eigen::JacobiSVD<Matrix> svd1(y1);
  return min_sigma - svd1.singularValues().maxCoeff() / (2.0 * grid);
}

bool primal_rank_condition(const std::vector<Matrix>& a_mats, const Matrix& y, double rel_tol) {
  const int n = static_cast<int>(y.rows());
  const int r = static_cast<int>(y.cols());
  const int m = static_cast<int>(a_mats.size());
  Matrix p(n * r, m);
  for (int i = 0; i < m; ++i) {
    const Matrix ay = a_mats[static_cast<std::size_t>(i)] * y;
    p.col(i) = Eigen::Map<const Vector>(ay.data(), n * r);
  }
  Eigen::JacobiSVD<Matrix> svd(p);
  const auto& sv = svd.singularValues();
  return m <= n * r && sv.minCoeff() > rel_tol * sv.maxCoeff();
}

}  // namespace

TVProblem make_synthetic(int n, int r, int m, std::uint64_t seed) {
  if (r < 1 || r >= n) throw std::invalid_argument("make_synthetic: need 1 <= r < n");
  if (r * (r + 1) / 2 > m || m > n * (n + 1) / 2)
    throw std::invalid_argument("make_synthetic: need r(r+1)/2 <= m <= n(n+1)/2");

  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t base = 16ull * static_cast<std::uint64_t>(attempt);
    Rng a_rng(seed, base + 0), y_rng(seed, base + 1), l_rng(seed, base + 2), d_rng(seed, base + 3);

    std::vector<Matrix> a_mats;
    a_mats.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      Matrix a(n, n);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k <= j; ++k) a(k, j) = a(j, k) = a_rng.normal();
      a_mats.push_back(std::move(a));
    }

    Matrix g(n, r);
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = y_rng.normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix y0 = qr.householderQ() * Matrix::Identity(n, r);
    for (int j = 0; j < r; ++j) y0.col(j) *= 1.0 + y_rng.uniform();

    Matrix y1(n, r);
    const double drift = 0.3 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < n; ++i) y1(i, j) = drift * y_rng.normal();

    Vector l0(m), l1(m);
    for (int i = 0; i < m; ++i) l0[i] = l_rng.normal();
    for (int i = 0; i < m; ++i) l1[i] = 0.3 * l_rng.normal();

    Vector d(n);
    for (int i = 0; i < n; ++i) d[i] = 1.0 + d_rng.uniform();

    if (min_sigma_r_on_curve(y0, y1) < 0.05) continue;
    LinearOperator op(a_mats);
    if (op.surjectivity_margin() <= 1e-8 * op.op_norm()) continue;
    bool nondegenerate = true;
    for (const double t : {0.0, 0.5, 1.0})
      nondegenerate = nondegenerate && primal_rank_condition(a_mats, y0 + t * y1, 1e-8);
    if (!nondegenerate) continue;

    TVProblem p;
    p.kind_ = ProblemKind::synthetic;
    p.n_ = n;
    p.horizon_ = 1.0;
    p.A_ = std::move(op);
    p.has_known_solution_ = true;
    p.known_rank_ = r;
    p.y0_ = std::move(y0);
    p.y1_ = std::move(y1);
    p.l0_ = std::move(l0);
    p.l1_ = std::move(l1);
    p.d_ = std::move(d);
    p.seed_ = seed;
    return p;
  }
  throw std::runtime_error("make_synthetic: no conforming instance found for this seed");
}

NondegeneracyReport check_nondegeneracy(const TVProblem& problem, double t, const Factor& y,
                                        const Matrix& z, double rel_tol) {
  const int n = problem.dim();
  const int r = static_cast<int>(y.cols());
  const int m = problem.num_constraints();
  NondegeneracyReport report;

  Matrix p(n * r, m);
  for (int i = 0; i < m; ++i) {
    const Matrix ay = problem.constraints().mat(i) * y;
    p.col(i) = Eigen::Map<const Vector>(ay.data(), n * r);
  }
  Eigen::JacobiSVD<Matrix> svd(p);
  report.primal_singular_values = svd.singularValues();
  const double smax = report.primal_singular_values.maxCoeff();
  report.primal_margin = smax > 0.0 ? report.primal_singular_values.minCoeff() / smax : 0.0;
  report.primal_nondegenerate =
      m <= n * r && smax > 0.0 && report.primal_singular_values.minCoeff() > rel_tol * smax;

  const auto rank_of = [rel_tol](const Matrix& s, Vector& eigs) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(s));
    eigs = es.eigenvalues();
    const double emax = eigs.cwiseAbs().maxCoeff();
    if (emax == 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < eigs.size(); ++i)
      if (std::abs(eigs[i]) > rel_tol * emax) ++rank;
    return rank;
  };
  report.rank_x = rank_of(y * y.transpose(), report.x_eigenvalues);
  report.rank_z = rank_of(z, report.z_eigenvalues);
  report.strictly_complementary = (report.rank_x + report.rank_z == n);
  (void)t;
  return report;
}

}  // namespace tvsdp
