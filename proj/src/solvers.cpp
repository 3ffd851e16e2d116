#include "symnmf/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "symnmf/errors.hpp"
#include "symnmf/nnls.hpp"

namespace symnmf {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::SymANLS: return "symanls";
    case Algorithm::SymHALS: return "symhals";
    case Algorithm::ASymHALS: return "asymhals";
    case Algorithm::PGD: return "pgd";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "symanls") return Algorithm::SymANLS;
  if (name == "symhals") return Algorithm::SymHALS;
  if (name == "asymhals") return Algorithm::ASymHALS;
  if (name == "pgd") return Algorithm::PGD;
  throw Error(ErrorKind::InvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Converged: return "Converged";
    case Status::MaxIters: return "MaxIters";
    case Status::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

void validate(const SolverConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (cfg.rank < 1) fail("rank must be >= 1");
  if (cfg.inner_loops < 1) fail("inner_loops must be >= 1");
  if (cfg.max_iters < 0) fail("max_iters must be >= 0");
  if (cfg.record_every < 1) fail("record_every must be >= 1");
  if (cfg.resync_every < 1) fail("resync_every must be >= 1");
  if (!(cfg.tol_obj >= 0.0) || !(cfg.tol_consensus >= 0.0)) fail("tolerances must be >= 0");
  if (cfg.lambda_override && !(*cfg.lambda_override >= 0.0)) fail("lambda override must be >= 0");
}

FactorPair init_factors(const SymmetricMatrix& x, Index r, std::uint64_t seed) {
  if (r < 1) throw Error(ErrorKind::InvalidArgument, "rank must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix u(x.n(), r);
  // Column-major fill order is part of the determinism contract.
  for (Index j = 0; j < r; ++j)
    for (Index i = 0; i < x.n(); ++i) u(i, j) = unif(rng);
  Factor f(std::move(u));
  return FactorPair(f, f);
}

namespace {

// argmin_{z >= 0} 1/2 ||Xbar - z w^T||^2 + lambda/2 ||z - w||^2 where
// numer = Xbar w + lambda w (or the transposed variant).
void clipped_ratio(Eigen::Ref<Vector> out, const Vector& numer, double denom) {
  if (denom > 0.0) {
    out = (numer / denom).cwiseMax(0.0);
  } else {
    out.setZero();  // only reachable with a zero lambda override
  }
}

// One column sweep over U with V fixed (transpose = false), or over V with U
// fixed (transpose = true). residual tracks X - U V^T.
void hals_sweep(Matrix& target, const Matrix& other, Matrix& residual, double lambda,
                bool transpose) {
  const Index r = target.cols();
  Vector numer(target.rows());
  for (Index i = 0; i < r; ++i) {
    auto t = target.col(i);
    const auto o = other.col(i);
    if (!transpose) {
      rank1_update(residual, 1.0, t, o);
      numer.noalias() = residual * o;
    } else {
      rank1_update(residual, 1.0, o, t);
      numer.noalias() = residual.transpose() * o;
    }
    numer += lambda * o;
    clipped_ratio(t, numer, o.squaredNorm() + lambda);
    if (!transpose) {
      rank1_update(residual, -1.0, t, o);
    } else {
      rank1_update(residual, -1.0, o, t);
    }
  }
}

struct HalsInner {
  double inner_sum_sq = 0.0;
  Matrix u_prev_last;  // U_k^{L-1}
  Matrix v_prev_last;  // V_k^{L-1}
};

void hals_outer(Matrix& u, Matrix& v, Matrix& residual, double lambda, int inner_loops,
                HalsInner* inner) {
  for (int j = 0; j < inner_loops; ++j) {
    if (inner && j == inner_loops - 1) inner->u_prev_last = u;
    if (inner) {
      const Matrix before = u;
      hals_sweep(u, v, residual, lambda, false);
      inner->inner_sum_sq += (u - before).squaredNorm();
    } else {
      hals_sweep(u, v, residual, lambda, false);
    }
  }
  for (int j = 0; j < inner_loops; ++j) {
    if (inner && j == inner_loops - 1) inner->v_prev_last = v;
    if (inner) {
      const Matrix before = v;
      hals_sweep(v, u, residual, lambda, true);
      inner->inner_sum_sq += (v - before).squaredNorm();
    } else {
      hals_sweep(v, u, residual, lambda, true);
    }
  }
}

// U-subproblem of SymANLS in Gram form: rows of U solve
//   min_{z >= 0} 1/2 z^T (V^T V + lambda I) z - z^T ((X + lambda I) V)_row.
Matrix anls_block(const Matrix& x, const Matrix& other, const Matrix& current, double lambda) {
  const Index r = other.cols();
  NnlsProblem p;
  p.gram = other.transpose() * other;
  p.gram.diagonal().array() += lambda;
  p.rhs = (x * other + lambda * other).transpose();
  p.warm_start = current.transpose();
  p.max_pivots = std::max<int>(100, 10 * static_cast<int>(r));
  return solve_nnls_exact(p).transpose();
}

void anls_outer(const Matrix& x, Matrix& u, Matrix& v, double lambda) {
  u = anls_block(x, v, u, lambda);
  v = anls_block(x, u, v, lambda);
}

void check_pair(const SymmetricMatrix& x, const FactorPair& w, const char* what) {
  if (w.n() != x.n()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": factor rows " +
                                                  std::to_string(w.n()) + " vs n = " +
                                                  std::to_string(x.n()));
  }
}

void check_residual(const SymmetricMatrix& x, const Matrix& residual, const char* what) {
  if (residual.rows() != x.n() || residual.cols() != x.n()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": residual must be n x n");
  }
}

double pgd_initial_step(const SymmetricMatrix& x, const Matrix& u) {
  return 1.0 / (4.0 * u.squaredNorm() + 2.0 * x.fro());
}

Matrix pgd_update(const SymmetricMatrix& x, const Matrix& u, const PgdStepRule& rule,
                  double h0) {
  const Matrix grad = symmetric_gradient(x, u);
  double eta = pgd_initial_step(x, u);
  if (!std::isfinite(eta)) return u;
  for (int halvings = 0; halvings <= rule.max_halvings; ++halvings, eta *= 0.5) {
    Matrix cand = (u - eta * grad).cwiseMax(0.0);
    const double h1 = symmetric_objective(x, cand);
    if (h1 <= h0 + rule.armijo_c * frobenius_inner(grad, cand - u)) return cand;
  }
  return u;  // no acceptable step: already stationary to working precision
}

bool all_finite(const Matrix& a, const Matrix& b) { return a.allFinite() && b.allFinite(); }

}  // namespace

FactorPair step_symanls(const SymmetricMatrix& x, const FactorPair& w, double lambda) {
  check_pair(x, w, "step_symanls");
  Matrix u = w.u.matrix();
  Matrix v = w.v.matrix();
  anls_outer(x.entries(), u, v, lambda);
  return FactorPair(Factor(std::move(u)), Factor(std::move(v)));
}

FactorPair step_symhals(const SymmetricMatrix& x, const FactorPair& w, double lambda,
                        Matrix& residual) {
  return step_asymhals(x, w, lambda, residual, 1);
}

FactorPair step_asymhals(const SymmetricMatrix& x, const FactorPair& w, double lambda,
                         Matrix& residual, int inner_loops, InnerDiagnostics* diag) {
  check_pair(x, w, "step_asymhals");
  check_residual(x, residual, "step_asymhals");
  if (inner_loops < 1) throw Error(ErrorKind::InvalidArgument, "inner_loops must be >= 1");
  Matrix u = w.u.matrix();
  Matrix v = w.v.matrix();
  HalsInner inner;
  hals_outer(u, v, residual, lambda, inner_loops, diag ? &inner : nullptr);
  if (diag) {
    diag->inner_sum_sq = inner.inner_sum_sq;
    diag->safeguard_dist =
        std::sqrt((u - inner.u_prev_last).squaredNorm() + (v - inner.v_prev_last).squaredNorm());
  }
  return FactorPair(Factor(std::move(u)), Factor(std::move(v)));
}

Factor step_pgd(const SymmetricMatrix& x, const Factor& u, const PgdStepRule& rule) {
  if (u.n() != x.n()) throw Error(ErrorKind::DimensionMismatch, "step_pgd: factor rows");
  const double h0 = symmetric_objective(x, u.matrix());
  return Factor(pgd_update(x, u.matrix(), rule, h0));
}

namespace {

class Runner {
 public:
  Runner(const SymmetricMatrix& x, const SolverConfig& cfg) : x_(x), cfg_(cfg) {}

  SolverResult go() {
    validate(cfg_);
    start_ = std::chrono::steady_clock::now();
    const FactorPair w0 = init_factors(x_, cfg_.rank, cfg_.seed);
    u_ = w0.u.matrix();
    v_ = w0.v.matrix();
    pgd_ = cfg_.algorithm == Algorithm::PGD;
    hals_ = cfg_.algorithm == Algorithm::SymHALS || cfg_.algorithm == Algorithm::ASymHALS;
    inner_loops_ = cfg_.algorithm == Algorithm::ASymHALS ? cfg_.inner_loops : 1;

    SolverResult res;
    if (pgd_) {
      const double sqrt_r = std::sqrt(static_cast<double>(cfg_.rank));
      const double resid = (x_.entries() - u_ * u_.transpose()).norm();
      res.b0 = 2.0 * sqrt_r * (resid + x_.fro());
    } else {
      schedule_.emplace(build_schedule(w0.u));
      res.lambda_bar = lambda_threshold(x_, w0.u);
      res.b0 = iterate_bound(x_, w0.u, schedule_->current());
    }
    if (hals_) residual_ = x_.entries() - u_ * v_.transpose();

    double lambda = current_lambda();
    double f_prev = objective(lambda).total;
    const double f0 = f_prev;
    const double f_floor = std::numeric_limits<double>::epsilon() * std::max(f0, 1e-300);
    res.trace.push_back(record(0, lambda));

    long k = 0;
    res.status = Status::MaxIters;
    while (k < cfg_.max_iters) {
      ++k;
      lambda = current_lambda();
      const double step_lambda = cfg_.lambda_override.value_or(lambda);
      const Matrix u_old = cfg_.collect_steps ? u_ : Matrix();
      const Matrix v_old = cfg_.collect_steps ? v_ : Matrix();

      HalsInner inner;
      step(step_lambda, cfg_.collect_steps ? &inner : nullptr);

      if (!all_finite(u_, v_)) {
        res.status = Status::Degenerate;
        res.warnings.push_back("non-finite iterate at iteration " + std::to_string(k));
        u_ = u_.unaryExpr([](double d) { return std::isfinite(d) ? std::max(d, 0.0) : 0.0; });
        v_ = v_.unaryExpr([](double d) { return std::isfinite(d) ? std::max(d, 0.0) : 0.0; });
        break;
      }
      if (hals_ && k % cfg_.resync_every == 0) {
        residual_ = x_.entries() - u_ * v_.transpose();
      }

      const ObjectiveValue f_now = objective(lambda);
      if (cfg_.collect_steps) {
        res.steps.push_back(step_record(k, lambda, f_prev, f_now.total, u_old, v_old, inner));
      }

      const double change = std::abs(f_prev - f_now.total) / std::max(f_prev, f_floor);
      const double vn = v_.norm();
      const double rel_consensus = pgd_ ? 0.0 : (vn > 0.0 ? (u_ - v_).norm() / vn : 0.0);
      const bool converged = change < cfg_.tol_obj && rel_consensus < cfg_.tol_consensus;

      if (schedule_) schedule_->advance(pair());

      if (k % cfg_.record_every == 0 || converged || k == cfg_.max_iters) {
        res.trace.push_back(record(k, lambda));
      }
      if (converged) {
        res.status = Status::Converged;
        break;
      }
      // Compare the next step against this iterate under the lambda it will use.
      f_prev = f_now.fit + 0.5 * current_lambda() * (pgd_ ? 0.0 : (u_ - v_).squaredNorm());
    }
    if (res.status == Status::Degenerate && res.trace.back().k != k) {
      res.trace.push_back(record(k, lambda));
    }

    res.iterations = k;
    res.u_final = Factor(u_);
    res.v_final = pgd_ ? Factor(u_) : Factor(v_);
    if (schedule_) {
      res.lambda_history = schedule_->history();
      res.warnings.insert(res.warnings.end(), schedule_->warnings().begin(),
                          schedule_->warnings().end());
    }
    return res;
  }

 private:
  PenaltySchedule build_schedule(const Factor& u0) const {
    const PenaltySettings& p = cfg_.penalty;
    switch (p.mode) {
      case PenaltyMode::Fixed:
        return p.fixed_lambda ? make_fixed_value(*p.fixed_lambda) : make_fixed(x_, u0, p.margin);
      case PenaltyMode::Adaptive:
        return make_adaptive(p.lambda0);
      case PenaltyMode::Multiplicative:
        return make_multiplicative(p.lambda0);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown penalty mode");
  }

  double current_lambda() const { return schedule_ ? schedule_->current() : 0.0; }

  FactorPair pair() const { return FactorPair(Factor(u_), Factor(v_)); }

  void step(double lambda, HalsInner* inner) {
    switch (cfg_.algorithm) {
      case Algorithm::SymANLS:
        anls_outer(x_.entries(), u_, v_, lambda);
        break;
      case Algorithm::SymHALS:
      case Algorithm::ASymHALS:
        hals_outer(u_, v_, residual_, lambda, inner_loops_, inner);
        break;
      case Algorithm::PGD:
        u_ = pgd_update(x_, u_, PgdStepRule{}, symmetric_objective(x_, u_));
        v_ = u_;
        break;
    }
  }

  ObjectiveValue objective(double lambda) const {
    ObjectiveValue f;
    if (pgd_) {
      f.fit = symmetric_objective(x_, u_);
    } else {
      f.fit = 0.5 * (x_.entries() - u_ * v_.transpose()).squaredNorm();
      f.penalty = 0.5 * lambda * (u_ - v_).squaredNorm();
    }
    f.total = f.fit + f.penalty;
    return f;
  }

  double kkt(double lambda) const {
    if (pgd_) return symmetric_kkt_residual(x_, Factor(u_));
    return kkt_residual(x_, pair(), lambda).total;
  }

  TraceRecord record(long k, double lambda) const {
    const ObjectiveValue f = objective(lambda);
    TraceRecord t;
    t.k = k;
    t.f_total = f.total;
    t.f_fit = f.fit;
    t.f_penalty = f.penalty;
    t.E = x_.fro() > 0.0 ? fitting_error(x_, u_) : 0.0;
    t.consensus = pgd_ ? 0.0 : (u_ - v_).norm();
    t.kkt = kkt(lambda);
    t.lambda = lambda;
    t.elapsed = cfg_.timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                            start_)
                                  .count()
                            : 0.0;
    return t;
  }

  StepRecord step_record(long k, double lambda, double f_before, double f_after,
                         const Matrix& u_old, const Matrix& v_old, const HalsInner& inner) const {
    StepRecord s;
    s.k = k;
    s.lambda = lambda;
    s.f_before = f_before;
    s.f_after = f_after;
    s.delta_sq = (u_ - u_old).squaredNorm() + (pgd_ ? 0.0 : (v_ - v_old).squaredNorm());
    if (hals_) {
      s.inner_sum_sq = inner.inner_sum_sq;
      s.safeguard_dist = std::sqrt((u_ - inner.u_prev_last).squaredNorm() +
                                   (v_ - inner.v_prev_last).squaredNorm());
      s.residual_drift = ((x_.entries() - u_ * v_.transpose()) - residual_).norm();
    } else {
      s.inner_sum_sq = s.delta_sq;
      s.safeguard_dist = std::sqrt(s.delta_sq);
    }
    s.kkt_after = kkt(lambda);
    s.norm_sq = pgd_ ? 2.0 * u_.squaredNorm() : u_.squaredNorm() + v_.squaredNorm();
    return s;
  }

  const SymmetricMatrix& x_;
  const SolverConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  Matrix u_, v_, residual_;
  std::optional<PenaltySchedule> schedule_;
  bool pgd_ = false;
  bool hals_ = false;
  int inner_loops_ = 1;
};

}  // namespace

SolverResult run(const SymmetricMatrix& x, const SolverConfig& cfg) {
  return Runner(x, cfg).go();
}

double fitted_log_rate(const std::vector<TraceRecord>& trace) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = trace.size() / 2; i < trace.size(); ++i) {
    if (trace[i].E > 0.0 && std::isfinite(trace[i].E)) {
      pts.emplace_back(static_cast<double>(trace[i].k), std::log10(trace[i].E));
    }
  }
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (auto [px, py] : pts) {
    mx += px;
    my += py;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (auto [px, py] : pts) {
    sxy += (px - mx) * (py - my);
    sxx += (px - mx) * (px - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace symnmf
