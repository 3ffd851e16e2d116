#include "symnmf/penalty.hpp"

#include <cmath>
#include <sstream>

#include "symnmf/errors.hpp"
#include "symnmf/objective.hpp"

namespace symnmf {

std::string_view to_string(PenaltyMode mode) {
  switch (mode) {
    case PenaltyMode::Fixed: return "fixed";
    case PenaltyMode::Adaptive: return "adaptive";
    case PenaltyMode::Multiplicative: return "mult101";
  }
  return "unknown";
}

PenaltyMode parse_penalty_mode(std::string_view name) {
  if (name == "fixed") return PenaltyMode::Fixed;
  if (name == "adaptive") return PenaltyMode::Adaptive;
  if (name == "mult101") return PenaltyMode::Multiplicative;
  throw Error(ErrorKind::InvalidArgument, "unknown lambda mode '" + std::string(name) + "'");
}

PenaltySchedule::PenaltySchedule(PenaltyMode mode, double lambda0)
    : mode_(mode), lambda0_(lambda0), current_(lambda0), history_{lambda0} {}

void PenaltySchedule::push(double value) {
  if (value > kLambdaCap) {
    value = kLambdaCap;
    if (!capped_) {
      capped_ = true;
      warnings_.push_back("lambda clamped at 1e12");
    }
  }
  current_ = value;
  history_.push_back(value);
}

double PenaltySchedule::update_adaptive(const FactorPair& w) {
  if (mode_ != PenaltyMode::Adaptive) {
    throw Error(ErrorKind::InvalidArgument, "update_adaptive on a non-adaptive schedule");
  }
  const double inner = std::abs(frobenius_inner(w.u.matrix(), w.v.matrix()));
  if (inner < kInnerProductFloor) {
    throw Error(ErrorKind::DegenerateFactors, "|<U, V>| is zero; adaptive ratio undefined");
  }
  const double ratio = (w.u.matrix().squaredNorm() + w.v.matrix().squaredNorm()) / (2.0 * inner);
  // Rounding can put the ratio a hair below 1 at exact consensus.
  push(current_ * std::max(ratio, 1.0));
  return current_;
}

double PenaltySchedule::advance(const FactorPair& w) {
  switch (mode_) {
    case PenaltyMode::Fixed:
      push(current_);
      break;
    case PenaltyMode::Adaptive:
      try {
        update_adaptive(w);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateFactors) throw;
        std::ostringstream os;
        os << "degenerate adaptive update at iteration " << history_.size() << "; lambda kept";
        warnings_.push_back(os.str());
        push(current_);
      }
      break;
    case PenaltyMode::Multiplicative: {
      const double vn = w.v.matrix().norm();
      const double rel = vn > 0.0 ? (w.u.matrix() - w.v.matrix()).norm() / vn : 0.0;
      push(rel < kMultiplicativeStop ? current_ : current_ * kMultiplicativeGrowth);
      break;
    }
  }
  return current_;
}

PenaltySchedule make_fixed(const SymmetricMatrix& x, const Factor& u0, double margin) {
  if (!(margin > 0.0)) throw Error(ErrorKind::NonPositiveLambda, "margin must be positive");
  const double threshold = lambda_threshold(x, u0);
  const double base = threshold > 0.0 ? threshold : PenaltySchedule::kThresholdFloor;
  return PenaltySchedule(PenaltyMode::Fixed, margin * base);
}

PenaltySchedule make_fixed_value(double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::NonPositiveLambda, "lambda must be positive");
  return PenaltySchedule(PenaltyMode::Fixed, lambda);
}

PenaltySchedule make_adaptive(double lambda0) {
  if (!(lambda0 > 0.0)) throw Error(ErrorKind::NonPositiveLambda, "lambda0 must be positive");
  return PenaltySchedule(PenaltyMode::Adaptive, lambda0);
}

PenaltySchedule make_multiplicative(double lambda0) {
  if (!(lambda0 > 0.0)) throw Error(ErrorKind::NonPositiveLambda, "lambda0 must be positive");
  return PenaltySchedule(PenaltyMode::Multiplicative, lambda0);
}

}  // namespace symnmf
