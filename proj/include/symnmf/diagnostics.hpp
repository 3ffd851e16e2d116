#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symnmf/solvers.hpp"

namespace symnmf {

struct CheckResult {
  CheckResult() = default;
  explicit CheckResult(std::string check_name) : name(std::move(check_name)) {}

  std::string name;
  bool passed = true;
  long violations = 0;
  long checked = 0;
  double worst = 0.0;  // largest violation margin seen (0 when none)
  std::string detail;
};

// f_total non-increasing along the trace, with slack tol_rel * f_total[0].
CheckResult check_monotone(const std::vector<TraceRecord>& trace, double tol_rel = 1e-12);

// f(W_k) - f(W_{k+1}) >= c * quantity - tol_rel * f0, where
//   SymANLS / SymHALS: c = lambda / 2,        quantity = ||dW||^2
//   A-SymHALS:         c = lambda / (4 L),    quantity = ||dW||^2 + inner sum
// Evaluated at each step's schedule lambda.
CheckResult check_sufficient_decrease(const std::vector<StepRecord>& steps, Algorithm algorithm,
                                      int inner_loops, double f0, double tol_rel = 1e-10);

// ||U_k||^2 + ||V_k||^2 <= b0 at every step.
CheckResult check_iterate_bound(const std::vector<StepRecord>& steps, double b0);

// dist(0, df(W_{k+1})) <= 2 r (2 b0 + lambda + ||X||_F) ||W_{k+1} - W_k^{L-1}||_F.
CheckResult check_safeguard(const std::vector<StepRecord>& steps, Index r, double b0,
                            double x_fro, double tol_abs = 1e-9);

// Maintained HALS residual within tol_rel * ||X||_F of X - U V^T.
CheckResult check_residual_integrity(const std::vector<StepRecord>& steps, double x_fro,
                                     double tol_rel = 1e-10);

// lambda history non-decreasing.
CheckResult check_lambda_monotone(const std::vector<double>& history);

struct VerifyOptions {
  std::uint64_t seed = 0;
  int seeds = 1;          // instances per check, seeds seed .. seed + seeds - 1
  Index n = 20;
  Index r = 3;
  double sigma = 0.1;
  long max_iters = 4000;
  std::optional<double> lambda_override;
};

// Lemma-level invariant suite on random synthetic instances: monotone
// descent, sufficient decrease, iterate bound, safeguard, residual integrity,
// consensus, criticality and NNLS oracle agreement.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace symnmf
