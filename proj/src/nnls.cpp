#include "symnmf/nnls.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "symnmf/errors.hpp"

namespace symnmf {

namespace {

void validate(const NnlsProblem& p) {
  if (p.gram.rows() != p.gram.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "nnls: gram matrix must be square");
  }
  if (p.rhs.rows() != p.gram.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "nnls: rhs rows must match gram size");
  }
  if (p.warm_start.size() != 0 &&
      (p.warm_start.rows() != p.rhs.rows() || p.warm_start.cols() != p.rhs.cols())) {
    throw Error(ErrorKind::DimensionMismatch, "nnls: warm start shape must match rhs");
  }
  if (p.max_pivots < 1) {
    throw Error(ErrorKind::InvalidArgument, "nnls: max_pivots must be >= 1");
  }
}

// Solves G_FF x_F = q_F with x zero off F; fills y = G x - q with y_F = 0.
void solve_passive(const Matrix& gram, const Eigen::Ref<const Vector>& q,
                   const std::vector<bool>& passive, Vector& x, Vector& y) {
  const Index r = gram.rows();
  std::vector<Index> idx;
  idx.reserve(r);
  for (Index i = 0; i < r; ++i)
    if (passive[i]) idx.push_back(i);

  x.setZero(r);
  if (!idx.empty()) {
    const Index k = static_cast<Index>(idx.size());
    Matrix sub(k, k);
    Vector rhs(k);
    for (Index a = 0; a < k; ++a) {
      rhs(a) = q(idx[a]);
      for (Index b = 0; b < k; ++b) sub(a, b) = gram(idx[a], idx[b]);
    }
    Eigen::LLT<Matrix> llt(sub);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::NotPositiveDefinite, "nnls: passive-set Gram block is not SPD");
    }
    const Vector sol = llt.solve(rhs);
    for (Index a = 0; a < k; ++a) x(idx[a]) = sol(a);
  }
  y.noalias() = gram * x - q;
  for (Index i : idx) y(i) = 0.0;
}

Vector bpp_column(const Matrix& gram, const Eigen::Ref<const Vector>& q,
                  const Vector* warm, int max_pivots) {
  const Index r = gram.rows();
  std::vector<bool> passive(r, false);
  if (warm) {
    for (Index i = 0; i < r; ++i) passive[i] = (*warm)(i) > 0.0;
  }
  Vector x, y;
  solve_passive(gram, q, passive, x, y);

  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  const double y_tol = 1e-14 * scale;
  constexpr int kFullExchangeBudget = 3;
  int budget = kFullExchangeBudget;
  Index best_infeasible = r + 1;

  for (int pivots = 0;; ++pivots) {
    std::vector<Index> infeasible;
    for (Index i = 0; i < r; ++i) {
      if ((passive[i] && x(i) < 0.0) || (!passive[i] && y(i) < -y_tol)) infeasible.push_back(i);
    }
    if (infeasible.empty()) break;
    if (pivots >= max_pivots) {
      throw Error(ErrorKind::PivotLimitExceeded,
                  "nnls: block pivoting exceeded " + std::to_string(max_pivots) + " pivots");
    }
    const Index count = static_cast<Index>(infeasible.size());
    if (count < best_infeasible) {
      best_infeasible = count;
      budget = kFullExchangeBudget;
      for (Index i : infeasible) passive[i] = !passive[i];
    } else if (budget > 0) {
      --budget;
      for (Index i : infeasible) passive[i] = !passive[i];
    } else {
      const Index i = infeasible.back();
      passive[i] = !passive[i];
    }
    solve_passive(gram, q, passive, x, y);
  }
  return x.cwiseMax(0.0);
}

double column_kkt_violation(const Matrix& gram, const Eigen::Ref<const Vector>& q,
                            const Eigen::Ref<const Vector>& z) {
  const Vector y = gram * z - q;
  double worst = 0.0;
  for (Index i = 0; i < z.size(); ++i) {
    worst = std::max({worst, -z(i), -y(i), std::abs(z(i) * y(i))});
  }
  return worst;
}

}  // namespace

Matrix solve_nnls(const NnlsProblem& p) {
  validate(p);
  const Index r = p.gram.rows();
  const Index m = p.rhs.cols();
  Matrix z(r, m);
  if (r == 1) {
    const double g = p.gram(0, 0);
    if (!(g > 0.0)) throw Error(ErrorKind::NotPositiveDefinite, "nnls: gram is not positive");
    for (Index j = 0; j < m; ++j) z(0, j) = std::max(p.rhs(0, j) / g, 0.0);
    return z;
  }
  const bool warm = p.warm_start.size() != 0;
  Vector seed;
  for (Index j = 0; j < m; ++j) {
    if (warm) seed = p.warm_start.col(j);
    z.col(j) = bpp_column(p.gram, p.rhs.col(j), warm ? &seed : nullptr, p.max_pivots);
  }
  return z;
}

Matrix projected_gradient_nnls(const NnlsProblem& p, double tol, int max_iters) {
  validate(p);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(p.gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues()(0) > 0.0)) {
    throw Error(ErrorKind::NotPositiveDefinite, "nnls: gram is not positive definite");
  }
  const double step = 1.0 / eig.eigenvalues().maxCoeff();
  Matrix z = p.warm_start.size() != 0 ? Matrix(p.warm_start.cwiseMax(0.0))
                                      : Matrix::Zero(p.rhs.rows(), p.rhs.cols());
  for (Index j = 0; j < z.cols(); ++j) {
    auto col = z.col(j);
    const auto q = p.rhs.col(j);
    for (int it = 0; it < max_iters; ++it) {
      if (column_kkt_violation(p.gram, q, col) <= tol) break;
      col = (col - step * (p.gram * col - q)).cwiseMax(0.0);
    }
  }
  return z;
}

Matrix solve_nnls_exact(const NnlsProblem& p) {
  try {
    return solve_nnls(p);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PivotLimitExceeded) throw;
  }
  return projected_gradient_nnls(p);
}

Matrix oracle_nnls(const NnlsProblem& p) {
  validate(p);
  const Index r = p.gram.rows();
  if (r > 12) {
    throw Error(ErrorKind::RankTooLarge,
                "oracle_nnls enumerates 2^r supports; r = " + std::to_string(r) + " > 12");
  }
  Matrix z = Matrix::Zero(r, p.rhs.cols());
  for (Index j = 0; j < p.rhs.cols(); ++j) {
    const Vector q = p.rhs.col(j);
    double best = 0.0;  // objective of z = 0
    Vector best_z = Vector::Zero(r);
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
      std::vector<Index> idx;
      for (Index i = 0; i < r; ++i)
        if (mask & (1u << i)) idx.push_back(i);
      const Index k = static_cast<Index>(idx.size());
      Matrix sub(k, k);
      Vector rhs(k);
      for (Index a = 0; a < k; ++a) {
        rhs(a) = q(idx[a]);
        for (Index b = 0; b < k; ++b) sub(a, b) = p.gram(idx[a], idx[b]);
      }
      const Vector sol = sub.fullPivLu().solve(rhs);
      if (sol.minCoeff() < 0.0) continue;
      Vector cand = Vector::Zero(r);
      for (Index a = 0; a < k; ++a) cand(idx[a]) = sol(a);
      const double obj = 0.5 * cand.dot(p.gram * cand) - cand.dot(q);
      if (obj < best) {
        best = obj;
        best_z = cand;
      }
    }
    z.col(j) = best_z;
  }
  return z;
}

double nnls_objective(const Matrix& gram, const Matrix& rhs, const Matrix& z) {
  return 0.5 * (z.array() * (gram * z).array()).sum() - (z.array() * rhs.array()).sum();
}

double nnls_kkt_violation(const Matrix& gram, const Matrix& rhs, const Matrix& z) {
  double worst = 0.0;
  for (Index j = 0; j < z.cols(); ++j) {
    worst = std::max(worst, column_kkt_violation(gram, rhs.col(j), z.col(j)));
  }
  return worst;
}

}  // namespace symnmf
