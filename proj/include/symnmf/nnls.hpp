#pragma once

#include "symnmf/matcore.hpp"

namespace symnmf {

// Batch of independent nonnegative least-squares problems sharing one Gram
// matrix: for each column q of rhs,
//   minimize 1/2 z^T G z - z^T q  subject to z >= 0.
struct NnlsProblem {
  Matrix gram;           // r x r, symmetric positive definite
  Matrix rhs;            // r x m
  int max_pivots = 100;  // per column
  Matrix warm_start;     // optional r x m; positive entries seed the passive set
};

inline constexpr double kNnlsKktTolerance = 1e-10;

// Block principal pivoting (full exchange with single-exchange backup).
// Throws PivotLimitExceeded, NotPositiveDefinite or DimensionMismatch.
Matrix solve_nnls(const NnlsProblem& p);

// Projected gradient with step 1/||G||_2, run until the KKT violation of
// every column is at most tol.
Matrix projected_gradient_nnls(const NnlsProblem& p, double tol = kNnlsKktTolerance,
                               int max_iters = 1'000'000);

// solve_nnls, falling back to projected gradient when pivoting hits its cap.
Matrix solve_nnls_exact(const NnlsProblem& p);

// Exhaustive enumeration of all 2^r supports; r <= 12 (RankTooLarge otherwise).
Matrix oracle_nnls(const NnlsProblem& p);

// 1/2 z^T G z - z^T q summed over columns.
double nnls_objective(const Matrix& gram, const Matrix& rhs, const Matrix& z);

// Largest of: max(-z_i, 0), max(-(Gz - q)_i, 0), |z_i (Gz - q)_i|.
double nnls_kkt_violation(const Matrix& gram, const Matrix& rhs, const Matrix& z);

}  // namespace symnmf
