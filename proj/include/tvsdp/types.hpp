#ifndef TVSDP_TYPES_HPP
#define TVSDP_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace tvsdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense n x r factor of a PSD matrix X = Y Y^T. Full column rank is a
/// semantic requirement of the operations that consume a factor; it is
/// checked (with a tolerance) where it matters, not by the type itself.
using Factor = Matrix;

/// Skew-symmetric r x r matrix, parametrized by its r(r-1)/2 strictly
/// lower-triangular entries in column-major order. The pack/unpack pair
/// skew_to_vec / vec_to_skew is the identity on these entries, exactly.
///
/// The KKT machinery works in the Frobenius-orthonormal basis
/// E_ij = (e_i e_j^T - e_j e_i^T)/sqrt(2) instead (which is what keeps the
/// step system symmetric); orthonormal_coords() converts to it.
class SkewMatrix {
 public:
  SkewMatrix() = default;

  explicit SkewMatrix(int r) : r_(r), entries_(Vector::Zero(coord_dim(r))) {}

  SkewMatrix(int r, Vector strict_lower) : r_(r), entries_(std::move(strict_lower)) {
    if (entries_.size() != coord_dim(r_))
      throw std::invalid_argument("SkewMatrix: entry vector has wrong length");
  }

  /// Number of free entries, r(r-1)/2.
  static int coord_dim(int r) { return r * (r - 1) / 2; }

  /// Projects an arbitrary square matrix onto its skew part.
  static SkewMatrix from_matrix(const Matrix& s) {
    if (s.rows() != s.cols())
      throw std::invalid_argument("SkewMatrix: matrix must be square");
    const int r = static_cast<int>(s.rows());
    Vector v(coord_dim(r));
    int k = 0;
    for (int j = 0; j < r; ++j)
      for (int i = j + 1; i < r; ++i) v[k++] = 0.5 * (s(i, j) - s(j, i));
    return SkewMatrix(r, std::move(v));
  }

  /// Builds from coordinates in the orthonormal basis (entries = c/sqrt(2)).
  static SkewMatrix from_orthonormal_coords(int r, const Vector& coords) {
    return SkewMatrix(r, coords / std::sqrt(2.0));
  }

  int size() const { return r_; }
  int dim() const { return static_cast<int>(entries_.size()); }
  const Vector& entries() const { return entries_; }
  Vector orthonormal_coords() const { return std::sqrt(2.0) * entries_; }

  /// Materializes the dense matrix; S(j,i) = -S(i,j) holds bit-exactly.
  Matrix to_matrix() const {
    Matrix s = Matrix::Zero(r_, r_);
    int k = 0;
    for (int j = 0; j < r_; ++j)
      for (int i = j + 1; i < r_; ++i) {
        const double v = entries_[k++];
        s(i, j) = v;
        s(j, i) = -v;
      }
    return s;
  }

  /// Frobenius norm of to_matrix().
  double norm() const { return std::sqrt(2.0) * entries_.norm(); }

 private:
  int r_ = 0;
  Vector entries_;
};

inline Vector skew_to_vec(const SkewMatrix& s) { return s.entries(); }

inline SkewMatrix vec_to_skew(int r, const Vector& v) { return SkewMatrix(r, v); }

/// Primal-dual point of the factorized problem: factor, equality
/// multipliers, and the skew multiplier of the horizontal-space constraint.
struct KKTPoint {
  Factor Y;
  Vector lambda;
  SkewMatrix mu;
};

/// Largest absolute asymmetry max_ij |X_ij - X_ji|.
inline double symmetry_error(const Matrix& x) {
  return (x - x.transpose()).cwiseAbs().maxCoeff();
}

/// 0.5 (X + X^T); the result is entrywise exactly symmetric.
inline Matrix symmetrize(const Matrix& x) { return 0.5 * (x + x.transpose()); }

}  // namespace tvsdp

#endif  // TVSDP_TYPES_HPP
