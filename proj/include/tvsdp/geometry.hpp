#ifndef TVSDP_GEOMETRY_HPP
#define TVSDP_GEOMETRY_HPP

#include "tvsdp/types.hpp"

namespace tvsdp {

/// X = Y Y^T. The result is exactly symmetric.
Matrix phi(const Factor& y);

/// Derivative of phi at Y in direction H: Y H^T + H Y^T (exactly symmetric).
/// Vanishes exactly on directions H = Y S with S skew.
Matrix dphi(const Factor& y, const Matrix& h);

/// Orthogonal projection of V onto the horizontal space at Y, i.e. onto
/// {H : Y^T H = H^T Y}. Computed as H = V - Y S where S is the unique skew
/// solution of (Y^T Y) S + S (Y^T Y) = Y^T V - V^T Y. Requires Y of full
/// column rank (otherwise the Lyapunov operator is singular).
Matrix horizontal_project(const Factor& y, const Matrix& v);

/// Max asymmetry of Y^T H; zero (up to tolerance) iff H is horizontal at Y.
double horizontality_error(const Factor& y, const Matrix& h);

/// Sharp lower bound on ||dphi(Y,H)||_F / ||H||_F over horizontal H:
/// sqrt(2) sigma_r(Y) when r < n and 2 sigma_r(Y) when r = n.
double dphi_lower_bound(const Factor& y);

/// sigma_r(Y): the radius of the horizontal ball around Y on which the
/// factorization map is injective. Invariant under Y -> Y Q.
double injectivity_radius(const Factor& y);

/// 2 lambda_r(X) / (sqrt(r+4) + sqrt(r)): any rank-r PSD matrix within this
/// Frobenius distance of X has a (unique) factor in the horizontal ball of
/// any factor of X. Throws if X does not have rank r within the relative
/// eigenvalue tolerance.
double inverse_injectivity_radius(const Matrix& x, int r, double rel_tol = 1e-8);

struct RecoveryResult {
  Matrix h;               // horizontal update, phi(Y + h) reproduces the target
  double distance = 0.0;  // ||X_tilde - phi(Y)||_F of the input
  bool within_radius = false;  // input distance below inverse_injectivity_radius
  bool within_ball = false;    // ||h||_F < sigma_r(Y), where uniqueness holds
};

/// Given a factor Y and a nearby rank-r PSD target, recovers the horizontal
/// H with phi(Y + H) = X_tilde: take the top-r factor Z of X_tilde, align it
/// to Y with the polar factor of Y^T Z (which makes Y^T (Z Q) symmetric
/// PSD), and return H = Z Q - Y. Outside the guaranteed region the result is
/// still computed but flagged. Throws if X_tilde is not rank r within
/// tolerance.
RecoveryResult recover_factor(const Factor& y, const Matrix& x_tilde, double rel_tol = 1e-8);

/// Distance between orbits: min over orthogonal Q of ||Y1 - Y2 Q||_F,
/// via the polar factor of Y2^T Y1. Symmetric in its arguments.
double orbit_distance(const Factor& y1, const Factor& y2);

/// Guaranteed time-interval length with a unique smooth solution curve in
/// the horizontal space: 2 lambda_star / (L (sqrt(r+4) + sqrt(r))), where
/// lambda_star lower-bounds the smallest positive eigenvalue of X_t and L
/// bounds ||dX_t/dt||_F.
double admissible_time_step(double lambda_star, double curve_speed, int r);

/// Orthogonal polar factor Q of M (M = P Q^T with P PSD), so that M Q is
/// symmetric PSD. Exposed for reuse; requires a square M.
Matrix polar_orthogonal(const Matrix& m);

}  // namespace tvsdp

#endif  // TVSDP_GEOMETRY_HPP
