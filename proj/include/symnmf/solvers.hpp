#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symnmf/matcore.hpp"
#include "symnmf/objective.hpp"
#include "symnmf/penalty.hpp"

namespace symnmf {

enum class Algorithm { SymANLS, SymHALS, ASymHALS, PGD };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);  // symanls | symhals | asymhals | pgd

enum class Status { Converged, MaxIters, Degenerate };
std::string_view to_string(Status s);

// How run() builds its PenaltySchedule once U0 is known.
struct PenaltySettings {
  PenaltyMode mode = PenaltyMode::Adaptive;
  double lambda0 = 1e-5;                // Adaptive / Multiplicative start
  double margin = 1.01;                 // Fixed: margin * lambda_threshold
  std::optional<double> fixed_lambda;   // Fixed: explicit value, bypasses the threshold
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::SymHALS;
  Index rank = 1;
  int inner_loops = 2;  // A-SymHALS only
  PenaltySettings penalty;
  long max_iters = 30000;
  double tol_obj = 1e-10;
  double tol_consensus = 1e-8;
  std::uint64_t seed = 0;
  long record_every = 1;
  long resync_every = 500;  // HALS residual re-synchronization period
  bool timing = true;       // false writes elapsed = 0 for byte-stable traces
  bool collect_steps = false;
  // Debug negative control: the update steps use this lambda while the
  // schedule (and every check against it) keeps the configured one.
  std::optional<double> lambda_override;
};

// Throws InvalidArgument on an inconsistent configuration.
void validate(const SolverConfig& cfg);

struct TraceRecord {
  long k = 0;
  double f_total = 0.0;
  double f_fit = 0.0;
  double f_penalty = 0.0;
  double E = 0.0;
  double consensus = 0.0;  // ||U - V||_F
  double kkt = 0.0;
  double lambda = 0.0;     // lambda that produced this iterate
  double elapsed = 0.0;    // seconds since start
};

// Per-outer-iteration quantities behind the descent lemmas. All objective
// values are taken at the lambda that governed the step.
struct StepRecord {
  long k = 0;
  double lambda = 0.0;
  double f_before = 0.0;
  double f_after = 0.0;
  double delta_sq = 0.0;       // ||W_{k+1} - W_k||_F^2
  double inner_sum_sq = 0.0;   // sum_j ||W_k^{j+1} - W_k^j||_F^2 (HALS family)
  double safeguard_dist = 0.0; // ||W_{k+1} - W_k^{L-1}||_F
  double kkt_after = 0.0;      // dist(0, df(W_{k+1}))
  double norm_sq = 0.0;        // ||U_{k+1}||^2 + ||V_{k+1}||^2
  double residual_drift = 0.0; // ||(X - U V^T) - maintained residual||_F (HALS family)
};

struct SolverResult {
  Factor u_final;
  Factor v_final;
  std::vector<TraceRecord> trace;
  std::vector<StepRecord> steps;  // filled when cfg.collect_steps
  Status status = Status::MaxIters;
  long iterations = 0;
  double b0 = 0.0;
  double lambda_bar = 0.0;        // threshold at U0 (alternating algorithms)
  std::vector<double> lambda_history;
  std::vector<std::string> warnings;
};

// U0 i.i.d. uniform on [0, 1] from a seeded mt19937_64; V0 = U0.
FactorPair init_factors(const SymmetricMatrix& x, Index r, std::uint64_t seed);

// One SymANLS outer iteration: exact U-subproblem then exact V-subproblem
// (with the new U), each as a batch NNLS in Gram form.
FactorPair step_symanls(const SymmetricMatrix& x, const FactorPair& w, double lambda);

// One SymHALS outer iteration. residual must hold X - U V^T on entry and is
// kept in sync on exit.
FactorPair step_symhals(const SymmetricMatrix& x, const FactorPair& w, double lambda,
                        Matrix& residual);

// Inner iterates recorded by A-SymHALS: inner_sum_sq and the distance from the
// result to W_k^{L-1}.
struct InnerDiagnostics {
  double inner_sum_sq = 0.0;
  double safeguard_dist = 0.0;
};

// L column sweeps over U (V fixed), then L sweeps over V (new U fixed).
FactorPair step_asymhals(const SymmetricMatrix& x, const FactorPair& w, double lambda,
                         Matrix& residual, int inner_loops, InnerDiagnostics* diag = nullptr);

struct PgdStepRule {
  double armijo_c = 1e-4;
  int max_halvings = 60;
};

// Projected gradient step on h(U) = 1/2 ||X - U U^T||_F^2 with backtracking
// from 1 / (4 ||U||_F^2 + 2 ||X||_F).
Factor step_pgd(const SymmetricMatrix& x, const Factor& u, const PgdStepRule& rule = {});

SolverResult run(const SymmetricMatrix& x, const SolverConfig& cfg);

// Least-squares slope of log10(E) against k over the second half of the
// trace; a negative slope indicates linear convergence. NaN when fewer than
// two usable points.
double fitted_log_rate(const std::vector<TraceRecord>& trace);

}  // namespace symnmf
