#include "symnmf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "symnmf/bench.hpp"
#include "symnmf/errors.hpp"
#include "symnmf/nnls.hpp"
#include "symnmf/objective.hpp"

namespace symnmf {

namespace {

void note(CheckResult& c, double margin) {
  ++c.checked;
  if (margin > 0.0) {
    ++c.violations;
    c.worst = std::max(c.worst, margin);
  }
}

CheckResult finish(CheckResult c) {
  c.passed = c.violations == 0;
  if (c.detail.empty()) {
    std::ostringstream os;
    os << c.violations << "/" << c.checked << " violations";
    if (c.violations) os << ", worst margin " << c.worst;
    c.detail = os.str();
  }
  return c;
}

void merge(CheckResult& into, const CheckResult& part) {
  into.checked += part.checked;
  into.violations += part.violations;
  into.worst = std::max(into.worst, part.worst);
}

}  // namespace

CheckResult check_monotone(const std::vector<TraceRecord>& trace, double tol_rel) {
  CheckResult c{"monotone_descent"};
  if (trace.empty()) return finish(c);
  const double slack = tol_rel * std::abs(trace.front().f_total);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    note(c, trace[i].f_total - trace[i - 1].f_total - slack);
  }
  return finish(c);
}

CheckResult check_sufficient_decrease(const std::vector<StepRecord>& steps, Algorithm algorithm,
                                      int inner_loops, double f0, double tol_rel) {
  CheckResult c{"sufficient_decrease"};
  const double slack = tol_rel * std::abs(f0);
  for (const StepRecord& s : steps) {
    double required = 0.0;
    if (algorithm == Algorithm::ASymHALS) {
      required = s.lambda / (4.0 * inner_loops) * (s.delta_sq + s.inner_sum_sq);
    } else if (algorithm != Algorithm::PGD) {
      required = 0.5 * s.lambda * s.delta_sq;
    }
    note(c, required - (s.f_before - s.f_after) - slack);
  }
  return finish(c);
}

CheckResult check_iterate_bound(const std::vector<StepRecord>& steps, double b0) {
  CheckResult c{"iterate_bound"};
  for (const StepRecord& s : steps) note(c, s.norm_sq - b0);
  return finish(c);
}

CheckResult check_safeguard(const std::vector<StepRecord>& steps, Index r, double b0,
                            double x_fro, double tol_abs) {
  CheckResult c{"safeguard"};
  for (const StepRecord& s : steps) {
    const double bound = safeguard_constant(r, b0, s.lambda, x_fro) * s.safeguard_dist;
    note(c, s.kkt_after - bound - tol_abs);
  }
  return finish(c);
}

CheckResult check_residual_integrity(const std::vector<StepRecord>& steps, double x_fro,
                                     double tol_rel) {
  CheckResult c{"residual_integrity"};
  for (const StepRecord& s : steps) note(c, s.residual_drift - tol_rel * x_fro);
  return finish(c);
}

CheckResult check_lambda_monotone(const std::vector<double>& history) {
  CheckResult c{"lambda_monotone"};
  for (std::size_t i = 1; i < history.size(); ++i) note(c, history[i - 1] - history[i]);
  return finish(c);
}

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  CheckResult monotone{"monotone_descent"}, decrease{"sufficient_decrease"},
      bound{"iterate_bound"}, safeguard{"safeguard"}, residual{"residual_integrity"},
      consensus{"consensus"}, criticality{"criticality"}, nnls{"nnls_oracle"};
  std::vector<std::string> errors;

  const Algorithm algos[] = {Algorithm::SymANLS, Algorithm::SymHALS, Algorithm::ASymHALS};
  for (int s = 0; s < opts.seeds; ++s) {
    const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(s);
    const SyntheticData data = gen_synthetic({opts.n, opts.r, opts.sigma, NoiseDist::Gaussian, seed});
    const double x_fro = data.x.fro();
    for (Algorithm a : algos) {
      SolverConfig cfg;
      cfg.algorithm = a;
      cfg.rank = opts.r;
      cfg.inner_loops = 2;
      cfg.penalty.mode = PenaltyMode::Fixed;
      cfg.max_iters = opts.max_iters;
      cfg.seed = seed;
      cfg.timing = false;
      cfg.collect_steps = true;
      cfg.lambda_override = opts.lambda_override;
      try {
        const SolverResult res = run(data.x, cfg);
        merge(monotone, check_monotone(res.trace));
        const double f0 = res.trace.front().f_total;
        merge(decrease, check_sufficient_decrease(res.steps, a, cfg.inner_loops, f0));
        merge(bound, check_iterate_bound(res.steps, res.b0));
        merge(safeguard, check_safeguard(res.steps, opts.r, res.b0, x_fro));
        if (a != Algorithm::SymANLS) merge(residual, check_residual_integrity(res.steps, x_fro));

        const double vn = res.v_final.matrix().norm();
        const double rel = (res.u_final.matrix() - res.v_final.matrix()).norm() / vn;
        note(consensus, rel - 1e-6);
        const double lambda = res.lambda_history.back();
        const double kkt = kkt_residual(data.x, FactorPair(res.u_final, res.v_final), lambda).total;
        note(criticality, kkt - 1e-6 * (1.0 + x_fro));
        note(criticality, symmetric_kkt_residual(data.x, res.u_final) - 1e-5 * (1.0 + x_fro));
      } catch (const std::exception& e) {
        errors.push_back(std::string(to_string(a)) + ": " + e.what());
      }
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> rank_dist(1, 6), cols_dist(1, 4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
      const int r = rank_dist(rng), m = cols_dist(rng);
      Matrix a(r + 2, r);
      for (Index i = 0; i < a.size(); ++i) a.data()[i] = gauss(rng);
      NnlsProblem p;
      p.gram = a.transpose() * a + 1e-2 * Matrix::Identity(r, r);
      p.rhs.resize(r, m);
      for (Index i = 0; i < p.rhs.size(); ++i) p.rhs.data()[i] = gauss(rng);
      const double diff = (solve_nnls_exact(p) - oracle_nnls(p)).cwiseAbs().maxCoeff();
      note(nnls, diff - 1e-8);
    }
  }

  std::vector<CheckResult> out;
  for (CheckResult* c : {&monotone, &decrease, &bound, &safeguard, &residual, &consensus,
                         &criticality, &nnls}) {
    out.push_back(finish(*c));
  }
  if (!errors.empty()) {
    CheckResult e{"solver_errors"};
    e.violations = static_cast<long>(errors.size());
    e.checked = e.violations;
    e.detail = errors.front();
    out.push_back(finish(e));
  }
  return out;
}

}  // namespace symnmf
