#include "tvsdp/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace tvsdp {

Matrix phi(const Factor& y) { return symmetrize(y * y.transpose()); }

Matrix dphi(const Factor& y, const Matrix& h) {
  if (h.rows() != y.rows() || h.cols() != y.cols())
    throw std::invalid_argument("dphi: direction shape mismatch");
  const Matrix m = y * h.transpose();
  return m + m.transpose();
}

Matrix horizontal_project(const Factor& y, const Matrix& v) {
  if (v.rows() != y.rows() || v.cols() != y.cols())
    throw std::invalid_argument("horizontal_project: shape mismatch");
  const Matrix gram = symmetrize(y.transpose() * y);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const Vector& g = es.eigenvalues();
  if (g.minCoeff() <= 1e-14 * std::max(1.0, g.maxCoeff()))
    throw std::invalid_argument("horizontal_project: factor is rank-deficient");

  // Solve the Lyapunov equation (Y^T Y) S + S (Y^T Y) = Y^T V - V^T Y in the
  // eigenbasis of the Gram matrix; the divisors g_i + g_j are all positive.
  const Matrix w = y.transpose() * v;
  const Matrix rhs = w - w.transpose();  // exactly skew
  const Matrix& u = es.eigenvectors();
  Matrix s_hat = u.transpose() * rhs * u;
  for (Eigen::Index i = 0; i < s_hat.rows(); ++i)
    for (Eigen::Index j = 0; j < s_hat.cols(); ++j) s_hat(i, j) /= g[i] + g[j];
  Matrix s = u * s_hat * u.transpose();
  s = 0.5 * (s - s.transpose());
  return v - y * s;
}

double horizontality_error(const Factor& y, const Matrix& h) {
  const Matrix w = y.transpose() * h;
  return (w - w.transpose()).cwiseAbs().maxCoeff();
}

double dphi_lower_bound(const Factor& y) {
  Eigen::JacobiSVD<Matrix> svd(y);
  const double sigma_r = svd.singularValues().minCoeff();
  return (y.cols() < y.rows() ? std::sqrt(2.0) : 2.0) * sigma_r;
}

double injectivity_radius(const Factor& y) {
  Eigen::JacobiSVD<Matrix> svd(y);
  return svd.singularValues().minCoeff();
}

namespace {

struct TopFactor {
  Matrix z;          // n x r with z z^T ~= x
  double lambda_r;   // r-th largest eigenvalue
};

// Top-r factor of a PSD matrix; throws unless x has numerical rank exactly r.
TopFactor top_rank_factor(const Matrix& x, int r, double rel_tol, const char* who) {
  const int n = static_cast<int>(x.rows());
  if (r < 1 || r > n) throw std::invalid_argument(std::string(who) + ": rank out of range");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(x));
  const Vector& e = es.eigenvalues();  // ascending
  const double emax = e[n - 1];
  if (emax <= 0.0) throw std::invalid_argument(std::string(who) + ": matrix is not PSD of positive rank");
  if (e[0] < -rel_tol * emax)
    throw std::invalid_argument(std::string(who) + ": matrix has a negative eigenvalue");
  if (e[n - r] <= rel_tol * emax)
    throw std::invalid_argument(std::string(who) + ": matrix rank is below the requested rank");
  if (n - r - 1 >= 0 && e[n - r - 1] > rel_tol * emax)
    throw std::invalid_argument(std::string(who) + ": matrix rank exceeds the requested rank");
  Matrix z(n, r);
  for (int k = 0; k < r; ++k)
    z.col(k) = es.eigenvectors().col(n - 1 - k) * std::sqrt(std::max(0.0, e[n - 1 - k]));
  return {std::move(z), e[n - r]};
}

}  // namespace

double inverse_injectivity_radius(const Matrix& x, int r, double rel_tol) {
  const TopFactor tf = top_rank_factor(x, r, rel_tol, "inverse_injectivity_radius");
  return 2.0 * tf.lambda_r / (std::sqrt(static_cast<double>(r) + 4.0) + std::sqrt(static_cast<double>(r)));
}

Matrix polar_orthogonal(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("polar_orthogonal: matrix must be square");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixV() * svd.matrixU().transpose();
}

RecoveryResult recover_factor(const Factor& y, const Matrix& x_tilde, double rel_tol) {
  const int r = static_cast<int>(y.cols());
  if (x_tilde.rows() != y.rows() || x_tilde.cols() != y.rows())
    throw std::invalid_argument("recover_factor: target shape mismatch");
  const TopFactor tf = top_rank_factor(x_tilde, r, rel_tol, "recover_factor");

  // Align the target factor to Y: with Q the orthogonal polar factor of
  // Y^T Z, the product Y^T (Z Q) is symmetric PSD, so H = Z Q - Y is
  // horizontal at Y.
  const Matrix q = polar_orthogonal(y.transpose() * tf.z);
  RecoveryResult out;
  out.h = tf.z * q - y;
  out.distance = (x_tilde - phi(y)).norm();
  const double sigma_r = injectivity_radius(y);
  const double radius = 2.0 * sigma_r * sigma_r /
                        (std::sqrt(static_cast<double>(r) + 4.0) + std::sqrt(static_cast<double>(r)));
  out.within_radius = out.distance < radius;
  out.within_ball = out.h.norm() < sigma_r;
  return out;
}

double orbit_distance(const Factor& y1, const Factor& y2) {
  if (y1.rows() != y2.rows() || y1.cols() != y2.cols())
    throw std::invalid_argument("orbit_distance: shape mismatch");
  const Matrix q = polar_orthogonal(y1.transpose() * y2);
  return (y1 - y2 * q).norm();
}

double admissible_time_step(double lambda_star, double curve_speed, int r) {
  if (!(lambda_star > 0.0) || !(curve_speed > 0.0) || r < 1)
    throw std::invalid_argument("admissible_time_step: inputs must be positive");
  return 2.0 * lambda_star /
         (curve_speed * (std::sqrt(static_cast<double>(r) + 4.0) + std::sqrt(static_cast<double>(r))));
}

}  // namespace tvsdp
