#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "symnmf/bench.hpp"
#include "symnmf/diagnostics.hpp"
#include "symnmf/trace_io.hpp"

using namespace symnmf;

namespace {

TraceRecord rec(long k, double f) {
  TraceRecord t;
  t.k = k;
  t.f_total = f;
  return t;
}

}  // namespace

TEST_CASE("monotone check flags an increase beyond tolerance") {
  CHECK(check_monotone({rec(0, 10), rec(1, 9), rec(2, 9)}).passed);
  const CheckResult bad = check_monotone({rec(0, 10), rec(1, 9), rec(2, 9.5)});
  CHECK_FALSE(bad.passed);
  CHECK(bad.violations == 1);
  CHECK(bad.worst == doctest::Approx(0.5));
}

TEST_CASE("sufficient decrease check uses the algorithm's constant") {
  StepRecord s;
  s.lambda = 2.0;
  s.f_before = 10.0;
  s.f_after = 9.0;
  s.delta_sq = 1.0;
  s.inner_sum_sq = 2.0;
  // HALS needs 1.0 (met exactly); A-SymHALS with L = 2 needs 2/8 * 3.
  CHECK(check_sufficient_decrease({s}, Algorithm::SymHALS, 1, 10.0).passed);
  CHECK(check_sufficient_decrease({s}, Algorithm::ASymHALS, 2, 10.0).passed);
  s.delta_sq = 1.5;
  CHECK_FALSE(check_sufficient_decrease({s}, Algorithm::SymANLS, 1, 10.0).passed);
}

TEST_CASE("bound, safeguard, residual and lambda checks") {
  StepRecord s;
  s.norm_sq = 5.0;
  CHECK(check_iterate_bound({s}, 5.0).passed);
  CHECK_FALSE(check_iterate_bound({s}, 4.9).passed);

  s.lambda = 1.0;
  s.safeguard_dist = 0.1;
  s.kkt_after = 2 * 2 * (2 * 1.0 + 1.0 + 1.0) * 0.1;
  CHECK(check_safeguard({s}, 2, 1.0, 1.0).passed);
  s.kkt_after *= 1.01;
  CHECK_FALSE(check_safeguard({s}, 2, 1.0, 1.0).passed);

  s.residual_drift = 1e-9;
  CHECK_FALSE(check_residual_integrity({s}, 1.0).passed);
  CHECK(check_residual_integrity({s}, 100.0).passed);

  CHECK(check_lambda_monotone({1, 1, 2, 3}).passed);
  CHECK_FALSE(check_lambda_monotone({1, 2, 1.5}).passed);
}

TEST_CASE("verification suite passes and its negative control fails") {
  VerifyOptions opts;
  for (const CheckResult& c : run_verification(opts)) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.passed);
  }
  opts.lambda_override = 0.0;
  bool decrease_failed = false;
  for (const CheckResult& c : run_verification(opts))
    if (c.name == "sufficient_decrease") decrease_failed = !c.passed;
  CHECK(decrease_failed);
}

TEST_CASE("trace CSV round-trips and JSON carries metadata") {
  SyntheticSpec spec;
  spec.n = 10;
  spec.r = 2;
  const SymmetricMatrix x = gen_synthetic(spec).x;
  SolverConfig cfg;
  cfg.rank = 2;
  cfg.max_iters = 20;
  const SolverResult r = run(x, cfg);

  std::stringstream csv;
  io::write_trace_csv(csv, r.trace);
  std::string header;
  std::getline(csv, header);
  CHECK(header == io::kTraceHeader);
  csv.seekg(0);
  const std::vector<TraceRecord> back = io::read_trace_csv(csv);
  REQUIRE(back.size() == r.trace.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].k == r.trace[i].k);
    CHECK(back[i].f_total == r.trace[i].f_total);
    CHECK(back[i].lambda == r.trace[i].lambda);
  }

  std::stringstream js;
  io::RunMetadata meta;
  meta.n = 10;
  meta.r = 2;
  io::write_trace_json(js, r, meta);
  const nlohmann::json j = nlohmann::json::parse(js.str());
  CHECK(j["metadata"]["n"] == 10);
  CHECK(j["trace"].size() == r.trace.size());
}
