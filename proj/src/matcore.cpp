#include "symnmf/matcore.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "symnmf/errors.hpp"

namespace symnmf {

namespace {

std::string shape(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(Matrix entries, double fro)
    : entries_(std::move(entries)), fro_(fro) {}

SymmetricMatrix SymmetricMatrix::make(Matrix raw) {
  if (raw.rows() != raw.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "symmetric matrix must be square, got " + shape(raw));
  }
  if (!raw.allFinite()) {
    throw Error(ErrorKind::NumericalError, "matrix has non-finite entries");
  }
  const double fro = raw.norm();
  const double asym = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  if (raw.size() > 0 && asym > kSymmetryTolerance * fro) {
    std::ostringstream os;
    os << "max |x_ij - x_ji| = " << asym << " exceeds " << kSymmetryTolerance << " * ||X||_F";
    throw Error(ErrorKind::NotSymmetric, os.str());
  }
  return SymmetricMatrix(std::move(raw), fro);
}

SpectralExtremes SymmetricMatrix::spectral() const {
  if (spectral_) return *spectral_;
  return spectral_extremes(*this);
}

void SymmetricMatrix::cache_spectral() {
  if (!spectral_) spectral_ = spectral_extremes(*this);
}

SpectralExtremes spectral_extremes(const SymmetricMatrix& x) {
  if (x.n() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> eig(x.entries(), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalError, "symmetric eigensolver did not converge");
  }
  const Vector& ev = eig.eigenvalues();  // ascending
  return {std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))), ev(0)};
}

Factor::Factor(Matrix entries) : entries_(std::move(entries)) {
  if (!entries_.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "factor has non-finite entries");
  }
  if (entries_.size() > 0 && entries_.minCoeff() < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "factor has negative entries");
  }
}

Factor Factor::zeros(Index n, Index r) { return Factor(Matrix::Zero(n, r)); }

FactorPair::FactorPair(Factor u_in, Factor v_in) : u(std::move(u_in)), v(std::move(v_in)) {
  if (u.n() != v.n() || u.r() != v.r()) {
    throw Error(ErrorKind::DimensionMismatch, "factor pair shapes " + shape(u.matrix()) +
                                                  " and " + shape(v.matrix()) + " differ");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + shape(a) + " vs " + shape(b));
  }
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "multiply: " + shape(a) + " * " + shape(b));
  }
  return a * b;
}

Matrix transpose_multiply(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "transpose_multiply: " + shape(a) + "^T * " + shape(b));
  }
  return a.transpose() * b;
}

void rank1_update(Matrix& m, double alpha, const Eigen::Ref<const Vector>& u,
                  const Eigen::Ref<const Vector>& v) {
  if (m.rows() != u.size() || m.cols() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch, "rank1_update: target " + shape(m));
  }
  m.noalias() += alpha * u * v.transpose();
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius_inner");
  return (a.array() * b.array()).sum();
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

}  // namespace symnmf
