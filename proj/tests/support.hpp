#ifndef TVSDP_TESTS_SUPPORT_HPP
#define TVSDP_TESTS_SUPPORT_HPP

#include <Eigen/QR>
#include <vector>

#include "tvsdp/geometry.hpp"
#include "tvsdp/rng.hpp"
#include "tvsdp/types.hpp"

namespace testsup {

using tvsdp::Matrix;
using tvsdp::Rng;
using tvsdp::Vector;

inline Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

inline Matrix random_symmetric(Rng& rng, int n) {
  Matrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) m(i, j) = m(j, i) = rng.normal();
  return m;
}

inline Matrix random_orthogonal(Rng& rng, int r) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, r, r));
  return qr.householderQ() * Matrix::Identity(r, r);
}

// Well-conditioned factor: orthonormal columns scaled into [0.5, 2].
inline Matrix random_factor(Rng& rng, int n, int r) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, r));
  Matrix y = qr.householderQ() * Matrix::Identity(n, r);
  for (int j = 0; j < r; ++j) y.col(j) *= 0.5 + 1.5 * rng.uniform();
  return y;
}

inline Matrix random_skew(Rng& rng, int r) {
  Matrix s = Matrix::Zero(r, r);
  for (int j = 0; j < r; ++j)
    for (int i = j + 1; i < r; ++i) {
      const double v = rng.normal();
      s(i, j) = v;
      s(j, i) = -v;
    }
  return s;
}

inline Matrix random_horizontal(Rng& rng, const Matrix& y) {
  return tvsdp::horizontal_project(y, random_matrix(rng, static_cast<int>(y.rows()),
                                                    static_cast<int>(y.cols())));
}

// Brute-force oracle for the constraint map: explicit double loop over
// entries, independent of the library's implementation.
inline Vector apply_oracle(const std::vector<Matrix>& mats, const Matrix& x) {
  Vector v(static_cast<Eigen::Index>(mats.size()));
  for (std::size_t k = 0; k < mats.size(); ++k) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) acc += mats[k](i, j) * x(i, j);
    v[static_cast<Eigen::Index>(k)] = acc;
  }
  return v;
}

// Entrywise oracle for Y Y^T: explicit triple loop.
inline Matrix phi_oracle(const Matrix& y) {
  const auto n = y.rows();
  const auto r = y.cols();
  Matrix x = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < r; ++k) x(i, j) += y(i, k) * y(j, k);
  return x;
}

}  // namespace testsup

#endif  // TVSDP_TESTS_SUPPORT_HPP
