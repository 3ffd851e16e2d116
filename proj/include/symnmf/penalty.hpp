#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "symnmf/matcore.hpp"

namespace symnmf {

enum class PenaltyMode {
  Fixed,
  Adaptive,
  // lambda <- 1.01 lambda until ||U - V||_F / ||V||_F < 1e-8; comparison only.
  Multiplicative,
};

std::string_view to_string(PenaltyMode mode);
PenaltyMode parse_penalty_mode(std::string_view name);  // "fixed" | "adaptive" | "mult101"

class PenaltySchedule {
 public:
  static constexpr double kLambdaCap = 1e12;
  static constexpr double kInnerProductFloor = 1e-300;
  static constexpr double kThresholdFloor = 1e-8;
  static constexpr double kMultiplicativeGrowth = 1.01;
  static constexpr double kMultiplicativeStop = 1e-8;

  PenaltyMode mode() const noexcept { return mode_; }
  double lambda0() const noexcept { return lambda0_; }
  double current() const noexcept { return current_; }
  // history()[k] is the lambda in force during iteration k + 1; history()[0] = lambda0.
  const std::vector<double>& history() const noexcept { return history_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  // Adaptive rule: lambda <- lambda (||U||^2 + ||V||^2) / (2 |<U, V>|).
  // Throws InvalidArgument outside Adaptive mode, DegenerateFactors when
  // |<U, V>| < 1e-300. Clamps at kLambdaCap.
  double update_adaptive(const FactorPair& w);

  // End-of-iteration hook for any mode. A degenerate adaptive update leaves
  // lambda unchanged and records a warning.
  double advance(const FactorPair& w);

  friend PenaltySchedule make_fixed(const SymmetricMatrix&, const Factor&, double);
  friend PenaltySchedule make_fixed_value(double);
  friend PenaltySchedule make_adaptive(double);
  friend PenaltySchedule make_multiplicative(double);

 private:
  PenaltySchedule(PenaltyMode mode, double lambda0);
  void push(double value);

  PenaltyMode mode_;
  double lambda0_;
  double current_;
  std::vector<double> history_;
  std::vector<std::string> warnings_;
  bool capped_ = false;
};

// margin * lambda_threshold(x, u0), or margin * 1e-8 when the threshold is 0.
PenaltySchedule make_fixed(const SymmetricMatrix& x, const Factor& u0, double margin = 1.01);
// Fixed schedule at an explicit value (throws NonPositiveLambda when <= 0).
PenaltySchedule make_fixed_value(double lambda);
// Throws NonPositiveLambda when lambda0 <= 0.
PenaltySchedule make_adaptive(double lambda0 = 1e-5);
PenaltySchedule make_multiplicative(double lambda0);

}  // namespace symnmf
