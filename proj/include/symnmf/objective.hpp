#pragma once

#include "symnmf/matcore.hpp"

namespace symnmf {

// g(U, V) = 1/2 ||X - U V^T||_F^2 + lambda/2 ||U - V||_F^2 split into parts.
struct ObjectiveValue {
  double fit = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

struct GradientPair {
  Matrix gu;
  Matrix gv;
};

struct KktResidual {
  double u = 0.0;
  double v = 0.0;
  double total = 0.0;
};

ObjectiveValue eval_objective(const SymmetricMatrix& x, const FactorPair& w, double lambda);

// Smooth part only:
//   gu = (U V^T - X) V + lambda (U - V)
//   gv = (U V^T - X)^T U - lambda (U - V)
GradientPair grad_g(const SymmetricMatrix& x, const FactorPair& w, double lambda);

// Projected-gradient residual of a nonnegatively constrained variable: |g| on
// free entries, max(-g, 0) on entries sitting at zero.
Matrix projected_residual(const Matrix& point, const Matrix& gradient);

// dist(0, subdifferential of f) for f = g + indicator(U >= 0) + indicator(V >= 0).
KktResidual kkt_residual(const SymmetricMatrix& x, const FactorPair& w, double lambda);

// Symmetric problem h(U) = 1/2 ||X - U U^T||_F^2.
double symmetric_objective(const SymmetricMatrix& x, const Matrix& u);
Matrix symmetric_gradient(const SymmetricMatrix& x, const Matrix& u);  // 2 (U U^T - X) U
double symmetric_kkt_residual(const SymmetricMatrix& x, const Factor& u);

// Any lambda strictly above this value forces U = V at every limit point of a
// descent method started from V0 = U0:
//   1/2 (||X||_2 + ||X - U0 U0^T||_F - sigma_min(X)).
double lambda_threshold(const SymmetricMatrix& x, const Factor& u0);

// Bound on ||U_k||_F^2 + ||V_k||_F^2 along any descent sequence from V0 = U0:
//   (1/lambda + 2 sqrt(r)) ||X - U0 U0^T||_F^2 + 2 sqrt(r) ||X||_F.
double iterate_bound(const SymmetricMatrix& x, const Factor& u0, double lambda);

// Lipschitz constant of grad g on the ball ||U||^2 + ||V||^2 <= radius_sq.
double gradient_lipschitz_bound(double radius_sq, double lambda, double x_fro);

// Constant c with dist(0, df(W_{k+1})) <= c ||W_{k+1} - W_k^{L-1}||_F for the
// HALS family: 2 r (2 B0 + lambda + ||X||_F).
double safeguard_constant(Index r, double b0, double lambda, double x_fro);

// E = ||X - U U^T||_F^2 / ||X||_F^2; throws ZeroMatrix when ||X||_F == 0.
double fitting_error(const SymmetricMatrix& x, const Factor& u);
double fitting_error(const SymmetricMatrix& x, const Matrix& u);

}  // namespace symnmf
