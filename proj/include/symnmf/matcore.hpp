#pragma once

#include <Eigen/Dense>

#include <optional>

namespace symnmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct SpectralExtremes {
  double spec_norm = 0.0;  // largest |eigenvalue|
  double sigma_min = 0.0;  // smallest signed eigenvalue
};

// Dense symmetric data matrix X. Symmetry is checked once at construction;
// the Frobenius norm is computed eagerly, the spectrum on request.
class SymmetricMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  // Throws DimensionMismatch (non-square) or NotSymmetric.
  static SymmetricMatrix make(Matrix raw);

  Index n() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }

  double fro() const noexcept { return fro_; }

  // Cached spectrum if cache_spectral() ran, else computed on the fly.
  SpectralExtremes spectral() const;
  void cache_spectral();
  bool has_cached_spectral() const noexcept { return spectral_.has_value(); }

 private:
  SymmetricMatrix(Matrix entries, double fro);

  Matrix entries_;
  double fro_ = 0.0;
  std::optional<SpectralExtremes> spectral_;
};

// Full symmetric eigendecomposition; throws NumericalError if it fails.
SpectralExtremes spectral_extremes(const SymmetricMatrix& x);

// Entrywise nonnegative n x r factor, stored column-major so that the
// column sweeps of the HALS family touch contiguous memory.
class Factor {
 public:
  Factor() = default;
  // Throws InvalidArgument on a negative or non-finite entry.
  explicit Factor(Matrix entries);

  static Factor zeros(Index n, Index r);

  Index n() const noexcept { return entries_.rows(); }
  Index r() const noexcept { return entries_.cols(); }
  const Matrix& matrix() const noexcept { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }

  friend bool operator==(const Factor& a, const Factor& b) {
    return a.entries_.rows() == b.entries_.rows() && a.entries_.cols() == b.entries_.cols() &&
           a.entries_ == b.entries_;
  }

 private:
  Matrix entries_;
};

// The joint variable W = (U, V).
struct FactorPair {
  Factor u;
  Factor v;

  // Throws DimensionMismatch when the shapes differ.
  FactorPair(Factor u_in, Factor v_in);

  Index n() const noexcept { return u.n(); }
  Index r() const noexcept { return u.r(); }
};

// Thin checked wrappers; all throw DimensionMismatch on incompatible shapes.
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose_multiply(const Matrix& a, const Matrix& b);  // a^T b
// m += alpha * u v^T, in place.
void rank1_update(Matrix& m, double alpha, const Eigen::Ref<const Vector>& u,
                  const Eigen::Ref<const Vector>& v);
double frobenius_inner(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);

void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

}  // namespace symnmf
