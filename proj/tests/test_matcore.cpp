#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "symnmf/errors.hpp"
#include "symnmf/matcore.hpp"

using namespace symnmf;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected symnmf::Error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("make_symmetric accepts the identity and caches its norm") {
  const SymmetricMatrix x = SymmetricMatrix::make(Matrix::Identity(2, 2));
  CHECK(x.n() == 2);
  CHECK(x.fro() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("make_symmetric on [[0,1],[1,0]] matches the characteristic polynomial") {
  Matrix raw(2, 2);
  raw << 0, 1, 1, 0;
  const SymmetricMatrix x = SymmetricMatrix::make(raw);
  const auto [lo, hi] = oracles::eig2x2(0, 1, 0);
  const SpectralExtremes s = spectral_extremes(x);
  CHECK(s.sigma_min == doctest::Approx(lo).epsilon(1e-14));
  CHECK(s.sigma_min == doctest::Approx(-1.0));
  CHECK(s.spec_norm == doctest::Approx(std::max(std::abs(lo), std::abs(hi))));
  CHECK(s.spec_norm == doctest::Approx(1.0));
}

TEST_CASE("make_symmetric rejects asymmetric and non-square input") {
  Matrix raw(2, 2);
  raw << 0, 1, 0, 0;
  CHECK(kind_of([&] { SymmetricMatrix::make(raw); }) == ErrorKind::NotSymmetric);
  CHECK(kind_of([] { SymmetricMatrix::make(Matrix::Zero(2, 3)); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("symmetry tolerance is relative to the Frobenius norm") {
  Matrix raw = Matrix::Constant(3, 3, 1e6);
  raw(0, 1) += 1e-8;  // 1e-8 < 1e-12 * 3e6
  CHECK_NOTHROW(SymmetricMatrix::make(raw));
  raw(0, 1) += 1e-4;
  CHECK_THROWS_AS(SymmetricMatrix::make(raw), Error);
}

TEST_CASE("spectral_extremes on simple spectra") {
  const SymmetricMatrix id = SymmetricMatrix::make(Matrix::Identity(3, 3));
  SpectralExtremes s = spectral_extremes(id);
  CHECK(s.spec_norm == doctest::Approx(1.0));
  CHECK(s.sigma_min == doctest::Approx(1.0));

  const SymmetricMatrix d = SymmetricMatrix::make(Eigen::Vector3d(5, 2, -1).asDiagonal().toDenseMatrix());
  s = spectral_extremes(d);
  CHECK(s.spec_norm == doctest::Approx(5.0));
  CHECK(s.sigma_min == doctest::Approx(-1.0));

  Matrix raw(2, 2);
  raw << 2, 1, 1, 2;
  const auto [lo, hi] = oracles::eig2x2(2, 1, 2);
  s = spectral_extremes(SymmetricMatrix::make(raw));
  CHECK(s.spec_norm == doctest::Approx(hi));
  CHECK(s.sigma_min == doctest::Approx(lo));
  CHECK(hi == doctest::Approx(3.0));
  CHECK(lo == doctest::Approx(1.0));
}

TEST_CASE("spectral norm takes the largest magnitude, even when negative") {
  const SymmetricMatrix d =
      SymmetricMatrix::make(Eigen::Vector3d(1, 2, -7).asDiagonal().toDenseMatrix());
  const SpectralExtremes s = spectral_extremes(d);
  CHECK(s.spec_norm == doctest::Approx(7.0));
  CHECK(s.sigma_min == doctest::Approx(-7.0));
}

TEST_CASE("cached spectrum agrees with on-demand computation") {
  std::mt19937_64 rng(3);
  SymmetricMatrix x = SymmetricMatrix::make(oracles::random_symmetric(6, rng));
  const SpectralExtremes live = x.spectral();
  CHECK_FALSE(x.has_cached_spectral());
  x.cache_spectral();
  CHECK(x.has_cached_spectral());
  CHECK(x.spectral().spec_norm == live.spec_norm);
  CHECK(x.spectral().sigma_min == live.sigma_min);
}

TEST_CASE("Rayleigh quotients lie between sigma_min and the spectral norm") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const SymmetricMatrix x = SymmetricMatrix::make(oracles::random_symmetric(7, rng));
    const SpectralExtremes s = spectral_extremes(x);
    for (int k = 0; k < 100; ++k) {
      Vector v(7);
      for (Index i = 0; i < 7; ++i) v(i) = g(rng);
      v.normalize();
      const double rq = v.dot(x.entries() * v);
      CHECK(rq >= s.sigma_min - 1e-12);
      CHECK(rq <= s.spec_norm + 1e-12);
    }
  }
}

TEST_CASE("spectral_extremes is invariant under symmetric permutation") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = oracles::random_symmetric(8, rng);
    const Matrix p = oracles::permutation_matrix(8, rng);
    const SpectralExtremes s1 = spectral_extremes(SymmetricMatrix::make(a));
    Matrix pap = p * a * p.transpose();
    pap = 0.5 * (pap + pap.transpose()).eval();
    const SpectralExtremes s2 = spectral_extremes(SymmetricMatrix::make(pap));
    CHECK(std::abs(s1.spec_norm - s2.spec_norm) < 1e-10);
    CHECK(std::abs(s1.sigma_min - s2.sigma_min) < 1e-10);
  }
}

TEST_CASE("gemm family") {
  std::mt19937_64 rng(1);
  const Matrix a = oracles::random_matrix(4, 3, rng);
  CHECK(multiply(a, Matrix::Identity(3, 3)).isApprox(a));
  CHECK(frobenius_inner(a, a) == doctest::Approx(frobenius_norm(a) * frobenius_norm(a)));
  CHECK(transpose_multiply(a, a).isApprox(a.transpose() * a));
  CHECK_THROWS_AS(multiply(a, a), Error);
  CHECK_THROWS_AS(frobenius_inner(a, a.transpose()), Error);
  CHECK_THROWS_AS(transpose_multiply(a, Matrix::Zero(3, 3)), Error);
}

TEST_CASE("rank1_update of ones on a zero matrix gives all ones") {
  Matrix m = Matrix::Zero(3, 3);
  rank1_update(m, 1.0, Vector::Ones(3), Vector::Ones(3));
  CHECK(m == Matrix::Ones(3, 3));
  CHECK_THROWS_AS(rank1_update(m, 1.0, Vector::Ones(2), Vector::Ones(3)), Error);
}

TEST_CASE("rank1_update followed by its inverse restores the matrix") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = oracles::random_symmetric(6, rng);
    Matrix m = x;
    const Vector u = oracles::random_matrix(6, 1, rng, -2, 2);
    const Vector v = oracles::random_matrix(6, 1, rng, -2, 2);
    rank1_update(m, 1.0, u, v);
    rank1_update(m, -1.0, u, v);
    CHECK((m - x).norm() <= 1e-12 * x.norm());
  }
}

TEST_CASE("Factor enforces nonnegativity and FactorPair enforces matching shapes") {
  Matrix bad = Matrix::Ones(2, 2);
  bad(1, 0) = -1e-3;
  CHECK(kind_of([&] { Factor f(bad); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { FactorPair w(Factor::zeros(3, 2), Factor::zeros(3, 1)); }) ==
        ErrorKind::DimensionMismatch);
  const FactorPair ok(Factor::zeros(3, 2), Factor::zeros(3, 2));
  CHECK(ok.n() == 3);
  CHECK(ok.r() == 2);
}
