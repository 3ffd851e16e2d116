#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "symnmf/errors.hpp"
#include "symnmf/nnls.hpp"

using namespace symnmf;

namespace {

Matrix random_spd(int r, std::mt19937_64& rng) {
  const Matrix a = oracles::random_matrix(r + 3, r, rng, -1.0, 1.0);
  return a.transpose() * a + 1e-2 * Matrix::Identity(r, r);
}

}  // namespace

TEST_CASE("two-variable instance with an interior solution") {
  NnlsProblem p;
  p.gram.resize(2, 2);
  p.gram << 2, 1, 1, 2;
  p.rhs.resize(2, 1);
  p.rhs << 1, 1;
  const Matrix z = solve_nnls(p);
  CHECK(z(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(z(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(nnls_kkt_violation(p.gram, p.rhs, z) <= kNnlsKktTolerance);
}

TEST_CASE("all-negative right-hand side gives the zero solution") {
  NnlsProblem p;
  p.gram = Matrix::Identity(3, 3);
  p.rhs = -Matrix::Ones(3, 2);
  CHECK(solve_nnls(p).isZero(0.0));
}

TEST_CASE("rank one uses the scalar closed form") {
  NnlsProblem p;
  p.gram = Matrix::Constant(1, 1, 4.0);
  p.rhs.resize(1, 3);
  p.rhs << 2.0, -1.0, 0.0;
  const Matrix z = solve_nnls(p);
  CHECK(z(0, 0) == 0.5);
  CHECK(z(0, 1) == 0.0);
  CHECK(z(0, 2) == 0.0);
}

TEST_CASE("block principal pivoting matches exhaustive enumeration") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> pick_r(2, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = pick_r(rng);
    NnlsProblem p;
    p.gram = random_spd(r, rng);
    p.rhs = oracles::random_matrix(r, 4, rng, -1.0, 1.0);
    if (trial % 10 == 0) p.rhs.col(0).setZero();
    const Matrix z = solve_nnls(p);
    const Matrix z_star = oracle_nnls(p);
    CHECK((z - z_star).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, z_star.cwiseAbs().maxCoeff()));
    CHECK(nnls_kkt_violation(p.gram, p.rhs, z) <= 1e-8);
    CHECK(nnls_objective(p.gram, p.rhs, z) <= nnls_objective(p.gram, p.rhs, z_star) + 1e-12);
  }
}

TEST_CASE("near-duplicate columns regularised by a ridge still solve exactly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = oracles::random_matrix(10, 4, rng);
    a.col(3) = a.col(2);
    NnlsProblem p;
    p.gram = a.transpose() * a + 1e-3 * Matrix::Identity(4, 4);
    p.rhs = a.transpose() * oracles::random_matrix(10, 2, rng, -1.0, 1.0);
    const Matrix z = solve_nnls(p);
    CHECK((z - oracle_nnls(p)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("warm start does not change the answer") {
  std::mt19937_64 rng(5);
  NnlsProblem p;
  p.gram = random_spd(6, rng);
  p.rhs = oracles::random_matrix(6, 5, rng, -1.0, 1.0);
  const Matrix cold = solve_nnls(p);
  p.warm_start = oracles::random_matrix(6, 5, rng, -1.0, 1.0);
  CHECK((solve_nnls(p) - cold).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("projected gradient reaches the enumerated optimum") {
  std::mt19937_64 rng(6);
  NnlsProblem p;
  p.gram = random_spd(4, rng) + Matrix::Identity(4, 4);
  p.rhs = oracles::random_matrix(4, 3, rng, -1.0, 1.0);
  const Matrix z = projected_gradient_nnls(p, 1e-12);
  CHECK((z - oracle_nnls(p)).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((solve_nnls_exact(p) - oracle_nnls(p)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("error paths") {
  NnlsProblem p;
  p.gram = Matrix::Identity(3, 3);
  p.rhs = Matrix::Ones(2, 1);
  CHECK_THROWS_WITH_AS(solve_nnls(p), doctest::Contains("DimensionMismatch"), Error);

  p.gram = -Matrix::Identity(2, 2);
  p.rhs = Matrix::Ones(2, 1);
  CHECK_THROWS_WITH_AS(solve_nnls(p), doctest::Contains("NotPositiveDefinite"), Error);

  p.gram = Matrix::Identity(13, 13);
  p.rhs = Matrix::Ones(13, 1);
  CHECK_THROWS_WITH_AS(oracle_nnls(p), doctest::Contains("RankTooLarge"), Error);
}
