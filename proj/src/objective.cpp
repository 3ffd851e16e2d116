#include "symnmf/objective.hpp"

#include <cmath>

#include "symnmf/errors.hpp"

namespace symnmf {

namespace {

void check_dims(const SymmetricMatrix& x, const Matrix& u, const char* what) {
  if (u.rows() != x.n()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": factor has " + std::to_string(u.rows()) +
                    " rows, matrix is " + std::to_string(x.n()) + "x" + std::to_string(x.n()));
  }
}

void check_dims(const SymmetricMatrix& x, const FactorPair& w, const char* what) {
  check_dims(x, w.u.matrix(), what);
}

}  // namespace

ObjectiveValue eval_objective(const SymmetricMatrix& x, const FactorPair& w, double lambda) {
  check_dims(x, w, "eval_objective");
  const Matrix& u = w.u.matrix();
  const Matrix& v = w.v.matrix();
  ObjectiveValue out;
  out.fit = 0.5 * (x.entries() - u * v.transpose()).squaredNorm();
  out.penalty = 0.5 * lambda * (u - v).squaredNorm();
  out.total = out.fit + out.penalty;
  return out;
}

GradientPair grad_g(const SymmetricMatrix& x, const FactorPair& w, double lambda) {
  check_dims(x, w, "grad_g");
  const Matrix& u = w.u.matrix();
  const Matrix& v = w.v.matrix();
  const Matrix resid = u * v.transpose() - x.entries();
  const Matrix diff = u - v;
  GradientPair g;
  g.gu = resid * v + lambda * diff;
  g.gv = resid.transpose() * u - lambda * diff;
  return g;
}

Matrix projected_residual(const Matrix& point, const Matrix& gradient) {
  require_same_shape(point, gradient, "projected_residual");
  return point.binaryExpr(gradient, [](double p, double g) {
    return p > 0.0 ? std::abs(g) : std::max(-g, 0.0);
  });
}

KktResidual kkt_residual(const SymmetricMatrix& x, const FactorPair& w, double lambda) {
  const GradientPair g = grad_g(x, w, lambda);
  KktResidual k;
  k.u = projected_residual(w.u.matrix(), g.gu).norm();
  k.v = projected_residual(w.v.matrix(), g.gv).norm();
  k.total = std::hypot(k.u, k.v);
  return k;
}

double symmetric_objective(const SymmetricMatrix& x, const Matrix& u) {
  check_dims(x, u, "symmetric_objective");
  return 0.5 * (x.entries() - u * u.transpose()).squaredNorm();
}

Matrix symmetric_gradient(const SymmetricMatrix& x, const Matrix& u) {
  check_dims(x, u, "symmetric_gradient");
  return 2.0 * ((u * u.transpose() - x.entries()) * u);
}

double symmetric_kkt_residual(const SymmetricMatrix& x, const Factor& u) {
  return projected_residual(u.matrix(), symmetric_gradient(x, u.matrix())).norm();
}

double lambda_threshold(const SymmetricMatrix& x, const Factor& u0) {
  check_dims(x, u0.matrix(), "lambda_threshold");
  const SpectralExtremes s = x.spectral();
  const double resid = (x.entries() - u0.matrix() * u0.matrix().transpose()).norm();
  return 0.5 * (s.spec_norm + resid - s.sigma_min);
}

double iterate_bound(const SymmetricMatrix& x, const Factor& u0, double lambda) {
  check_dims(x, u0.matrix(), "iterate_bound");
  const double sqrt_r = std::sqrt(static_cast<double>(u0.r()));
  const double resid_sq = (x.entries() - u0.matrix() * u0.matrix().transpose()).squaredNorm();
  return (1.0 / lambda + 2.0 * sqrt_r) * resid_sq + 2.0 * sqrt_r * x.fro();
}

double gradient_lipschitz_bound(double radius_sq, double lambda, double x_fro) {
  return 2.0 * radius_sq + lambda + x_fro;
}

double safeguard_constant(Index r, double b0, double lambda, double x_fro) {
  return 2.0 * static_cast<double>(r) * gradient_lipschitz_bound(b0, lambda, x_fro);
}

double fitting_error(const SymmetricMatrix& x, const Matrix& u) {
  check_dims(x, u, "fitting_error");
  if (x.fro() == 0.0) throw Error(ErrorKind::ZeroMatrix, "fitting error undefined for X = 0");
  return (x.entries() - u * u.transpose()).squaredNorm() / (x.fro() * x.fro());
}

double fitting_error(const SymmetricMatrix& x, const Factor& u) {
  return fitting_error(x, u.matrix());
}

}  // namespace symnmf
