#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tvsdp/geometry.hpp"
#include "tvsdp/kkt.hpp"
#include "tvsdp/problem.hpp"

using namespace tvsdp;
using testsup::apply_oracle;
using testsup::random_matrix;
using testsup::random_symmetric;

TEST_CASE("constraint map: diagonal operator on the identity gives all-ones") {
  const TVProblem p = make_maxcut(4, 1.0, 11);
  const Vector v = p.constraints().apply(Matrix::Identity(4, 4));
  CHECK((v - Vector::Ones(4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.constraints().apply(Matrix::Zero(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constraint map: matches the brute-force entrywise oracle") {
  testsup::Rng rng(5);
  std::vector<Matrix> mats;
  for (int i = 0; i < 5; ++i) mats.push_back(random_symmetric(rng, 3));
  const LinearOperator op(mats);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = random_symmetric(rng, 3);
    const Vector got = op.apply(x);
    const Vector want = apply_oracle(mats, x);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12 * want.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("adjoint: basis vectors and the adjoint identity") {
  testsup::Rng rng(6);
  std::vector<Matrix> mats;
  for (int i = 0; i < 4; ++i) mats.push_back(random_symmetric(rng, 5));
  const LinearOperator op(mats);

  CHECK(op.adjoint(Vector::Zero(4)).cwiseAbs().maxCoeff() == 0.0);
  Vector e1 = Vector::Zero(4);
  e1[0] = 1.0;
  CHECK((op.adjoint(e1) - mats[0]).cwiseAbs().maxCoeff() == 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    const Vector lambda = random_matrix(rng, 4, 1);
    const Matrix x = random_symmetric(rng, 5);
    const double lhs = op.adjoint(lambda).cwiseProduct(x).sum();
    const double rhs = lambda.dot(op.apply(x));
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("constraint map: dimension mismatches are rejected") {
  const TVProblem p = make_maxcut(4, 1.0, 1);
  CHECK_THROWS_AS((void)p.constraints().apply(Matrix::Identity(5, 5)), std::invalid_argument);
  CHECK_THROWS_AS((void)p.constraints().adjoint(Vector::Ones(5)), std::invalid_argument);
}

TEST_CASE("maxcut generator: fixed constraint structure") {
  const TVProblem p = make_maxcut(4, 1.0, 3);
  CHECK(p.num_constraints() == 4);
  CHECK(p.dim() == 4);
  CHECK(p.horizon() == 1.0);
  CHECK((p.rhs(0.0) - Vector::Ones(4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((p.rhs(0.7) - Vector::Ones(4)).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 4; ++i) {
    Matrix want = Matrix::Zero(4, 4);
    want(i, i) = 1.0;
    CHECK((p.constraints().mat(i) - want).cwiseAbs().maxCoeff() == 0.0);
  }
  // diagonal-extraction rows are orthonormal in the scaled vectorization
  CHECK(p.constraints().surjectivity_margin() == doctest::Approx(1.0));
}

TEST_CASE("maxcut generator: determinism and symmetry") {
  const TVProblem a = make_maxcut(20, 0.5, 99);
  const TVProblem b = make_maxcut(20, 0.5, 99);
  CHECK((a.objective(0.0) - b.objective(0.0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.objective(1.0) - b.objective(1.0)).cwiseAbs().maxCoeff() == 0.0);

  const Matrix w0 = a.objective(0.0);
  CHECK(symmetry_error(w0) == 0.0);
  CHECK(w0.diagonal().cwiseAbs().maxCoeff() == 0.0);

  const TVProblem c = make_maxcut(20, 0.5, 100);
  CHECK((a.objective(0.0) - c.objective(0.0)).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("maxcut generator: sparsity density close to the target") {
  const TVProblem p = make_maxcut(100, 0.5, 7);
  const Matrix w0 = p.objective(0.0);
  int nonzero = 0;
  for (int j = 1; j < 100; ++j)
    for (int i = 0; i < j; ++i)
      if (w0(i, j) != 0.0) ++nonzero;
  const double fraction = static_cast<double>(nonzero) / (100.0 * 99.0 / 2.0);
  CHECK(fraction > 0.45);
  CHECK(fraction < 0.55);
}

TEST_CASE("maxcut generator: objective is affine in t up to roundoff") {
  const TVProblem p = make_maxcut(15, 0.8, 2);
  const Matrix c0 = p.objective(0.0);
  const Matrix c1 = p.objective(1.0);
  for (const double t : {0.25, 0.5, 0.3141}) {
    const Matrix direct = p.objective(t);
    const Matrix affine = c0 + t * (c1 - c0);
    const double scale = std::max(1.0, c0.cwiseAbs().maxCoeff() + c1.cwiseAbs().maxCoeff());
    CHECK((direct - affine).cwiseAbs().maxCoeff() <= 1e-15 * scale);
  }
}

TEST_CASE("maxcut generator: parameter validation") {
  CHECK_THROWS_AS(make_maxcut(10, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_maxcut(10, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_maxcut(1, 0.5, 1), std::invalid_argument);
}

TEST_CASE("synthetic generator: the stored curve is stationary and feasible") {
  const TVProblem p = make_synthetic(8, 2, 5, 1);
  REQUIRE(p.has_known_solution());
  testsup::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = rng.uniform();
    const Factor y = p.known_factor(t);
    const Vector lambda = p.known_multiplier(t);
    const Matrix grad = (p.objective(t) - p.constraints().adjoint(lambda)) * y;
    const Vector gap = p.constraints().apply(y * y.transpose()) - p.rhs(t);
    const double scale = std::max(1.0, p.objective(t).cwiseAbs().maxCoeff());
    CHECK(grad.cwiseAbs().maxCoeff() <= 1e-9 * scale);
    CHECK(gap.cwiseAbs().maxCoeff() <= 1e-10 * scale);
    CHECK(kkt_residual(p, t, y, lambda) <= 1e-9);
  }
}

TEST_CASE("synthetic generator: strict complementarity by construction") {
  const TVProblem p = make_synthetic(8, 2, 5, 1);
  for (const double t : {0.0, 0.5, 1.0}) {
    const Factor y = p.known_factor(t);
    const Matrix z = p.objective(t) - p.constraints().adjoint(p.known_multiplier(t));
    const auto report = check_nondegeneracy(p, t, y, z);
    CHECK(report.rank_x == 2);
    CHECK(report.rank_z == 6);
    CHECK(report.strictly_complementary);
    CHECK(report.primal_nondegenerate);
    CHECK(report.pass());
  }
}

TEST_CASE("synthetic generator: determinism and parameter validation") {
  const TVProblem a = make_synthetic(6, 2, 4, 9);
  const TVProblem b = make_synthetic(6, 2, 4, 9);
  CHECK((a.known_factor(0.3) - b.known_factor(0.3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.objective(0.77) - b.objective(0.77)).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(make_synthetic(8, 3, 5, 1), std::invalid_argument);  // r(r+1)/2 > m
  CHECK_THROWS_AS(make_synthetic(4, 4, 8, 1), std::invalid_argument);  // r == n
  CHECK_THROWS_AS(make_synthetic(4, 2, 11, 1), std::invalid_argument); // m > n(n+1)/2
}

TEST_CASE("non-degeneracy diagnostic: forced failures and trivial passes") {
  const TVProblem p = make_synthetic(6, 2, 4, 9);
  const Factor y = p.known_factor(0.0);

  // Z = 0 destroys strict complementarity when r < n.
  const auto zero_z = check_nondegeneracy(p, 0.0, y, Matrix::Zero(6, 6));
  CHECK_FALSE(zero_z.strictly_complementary);
  CHECK(zero_z.rank_z == 0);

  // m = 1, A_1 = I, Y = e_1: the single column vec(A_1 Y) is nonzero.
  std::vector<Matrix> mats{Matrix::Identity(2, 2)};
  const TVProblem tiny = TVProblem::explicit_affine(
      Matrix::Identity(2, 2), Matrix::Zero(2, 2), mats, Vector::Ones(1), Vector::Zero(1), 1.0);
  Factor e1 = Matrix::Zero(2, 1);
  e1(0, 0) = 1.0;
  const auto tiny_report = check_nondegeneracy(tiny, 0.0, e1, Matrix::Zero(2, 2));
  CHECK(tiny_report.primal_nondegenerate);
}

TEST_CASE("surjectivity margin: degenerate operator is flagged") {
  std::vector<Matrix> mats;
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;
  mats.push_back(a);
  mats.push_back(2.0 * a);  // linearly dependent
  const LinearOperator op(mats);
  CHECK(op.surjectivity_margin() <= 1e-12 * op.op_norm());
}
