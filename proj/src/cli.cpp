#include "symnmf/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "symnmf/bench.hpp"
#include "symnmf/diagnostics.hpp"
#include "symnmf/errors.hpp"
#include "symnmf/matrix_io.hpp"
#include "symnmf/solvers.hpp"
#include "symnmf/trace_io.hpp"

namespace symnmf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SolverFlags {
  std::string algo = "symhals";
  long rank = 1;
  int inner_loops = 2;
  std::string lambda_mode = "adaptive";
  double lambda0 = 1e-5;
  double margin = 1.01;
  std::optional<double> lambda;
  double tol_obj = 1e-10;
  double tol_consensus = 1e-8;
  long max_iters = 30000;
  std::uint64_t seed = 0;
  long record_every = 1;
  std::string out_dir = ".";
  bool no_timing = false;
  bool json_summary = false;
};

void add_solver_flags(CLI::App* app, SolverFlags& f, bool with_algo, bool with_rank) {
  if (with_algo) {
    app->add_option("--algo", f.algo, "symanls | symhals | asymhals | pgd")
        ->capture_default_str();
  }
  if (with_rank) app->add_option("--rank", f.rank, "factorization rank r")->capture_default_str();
  app->add_option("--inner-loops", f.inner_loops, "A-SymHALS inner sweeps L")
      ->capture_default_str();
  app->add_option("--lambda-mode", f.lambda_mode, "fixed | adaptive | mult101")
      ->capture_default_str();
  app->add_option("--lambda0", f.lambda0, "initial penalty (adaptive, mult101)")
      ->capture_default_str();
  app->add_option("--margin", f.margin, "fixed mode: lambda = margin * threshold")
      ->capture_default_str();
  app->add_option("--lambda", f.lambda, "fixed mode: explicit lambda (overrides --margin)");
  app->add_option("--tol-obj", f.tol_obj, "relative objective-change tolerance")
      ->capture_default_str();
  app->add_option("--tol-consensus", f.tol_consensus, "||U-V||_F/||V||_F tolerance")
      ->capture_default_str();
  app->add_option("--max-iters", f.max_iters, "outer iteration cap")->capture_default_str();
  app->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  app->add_option("--record-every", f.record_every, "trace stride")->capture_default_str();
  app->add_option("--out-dir", f.out_dir, "output directory")->capture_default_str();
  app->add_flag("--no-timing", f.no_timing, "write elapsed = 0 for byte-stable traces");
  app->add_flag("--json", f.json_summary, "also write a JSON summary");
}

SolverConfig to_config(const SolverFlags& f) {
  SolverConfig cfg;
  cfg.algorithm = parse_algorithm(f.algo);
  cfg.rank = f.rank;
  cfg.inner_loops = f.inner_loops;
  cfg.penalty.mode = parse_penalty_mode(f.lambda_mode);
  cfg.penalty.lambda0 = f.lambda0;
  cfg.penalty.margin = f.margin;
  cfg.penalty.fixed_lambda = f.lambda;
  cfg.max_iters = f.max_iters;
  cfg.tol_obj = f.tol_obj;
  cfg.tol_consensus = f.tol_consensus;
  cfg.seed = f.seed;
  cfg.record_every = f.record_every;
  cfg.timing = !f.no_timing;
  validate(cfg);
  return cfg;
}

json config_json(const SolverConfig& cfg) {
  json j = {
      {"algorithm", std::string(to_string(cfg.algorithm))},
      {"rank", cfg.rank},
      {"inner_loops", cfg.inner_loops},
      {"lambda_mode", std::string(to_string(cfg.penalty.mode))},
      {"lambda0", cfg.penalty.lambda0},
      {"margin", cfg.penalty.margin},
      {"tol_obj", cfg.tol_obj},
      {"tol_consensus", cfg.tol_consensus},
      {"max_iters", cfg.max_iters},
      {"seed", cfg.seed},
      {"record_every", cfg.record_every},
      {"timing", cfg.timing},
  };
  if (cfg.penalty.fixed_lambda) j["lambda"] = *cfg.penalty.fixed_lambda;
  return j;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
}

struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  json config = json::object();
  json inputs = json::object();
  json outputs = json::object();

  void write(const fs::path& dir) {
    outputs["manifest"] = (dir / "manifest.json").string();
    write_json(dir / "manifest.json", {{"command", command},
                                       {"argv", argv},
                                       {"config", config},
                                       {"inputs", inputs},
                                       {"outputs", outputs},
                                       {"version", kVersion},
                                       {"timestamp", utc_timestamp()}});
  }
};

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create '" + dir + "': " + ec.message());
  return p;
}

int status_exit(Status s) { return s == Status::Converged ? kExitOk : kExitNotConverged; }

// ---------------------------------------------------------------- factorize

int cmd_factorize(const std::string& matrix_path, const SolverFlags& flags,
                  const std::vector<std::string>& argv, std::ostream& out) {
  const SolverConfig cfg = to_config(flags);
  const SymmetricMatrix x = SymmetricMatrix::make(io::read_matrix(matrix_path));
  const SolverResult res = run(x, cfg);

  const fs::path dir = prepare_dir(flags.out_dir);
  Manifest m{"factorize", argv, config_json(cfg)};
  m.inputs["matrix"] = matrix_path;
  io::write_matrix(dir / "U.csv", res.u_final.matrix());
  io::write_matrix(dir / "V.csv", res.v_final.matrix());
  io::write_trace_csv(dir / "trace.csv", res.trace);
  m.outputs = {{"U", (dir / "U.csv").string()},
               {"V", (dir / "V.csv").string()},
               {"trace", (dir / "trace.csv").string()}};
  if (flags.json_summary) {
    std::ofstream tj(dir / "trace.json");
    io::write_trace_json(tj, res,
                         {cfg.algorithm, cfg.seed, x.n(), cfg.rank, cfg.inner_loops, cfg.penalty});
    m.outputs["trace_json"] = (dir / "trace.json").string();
  }
  m.write(dir);

  const TraceRecord& last = res.trace.back();
  out << "status " << to_string(res.status) << " iterations " << res.iterations << " E "
      << std::setprecision(6) << last.E << " consensus " << last.consensus << '\n';
  return status_exit(res.status);
}

// ---------------------------------------------------------------- synth

struct SynthFlags {
  long n = 300;
  long r = 20;
  double sigma = 0.1;
  std::string noise = "gaussian";
  std::string algos = "symanls,symhals,asymhals";
  bool save_matrix = false;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_synth(const SynthFlags& sf, SolverFlags flags, const std::vector<std::string>& argv,
              std::ostream& out) {
  flags.rank = sf.r;
  std::vector<Algorithm> algos;
  for (const std::string& name : split_list(sf.algos)) algos.push_back(parse_algorithm(name));
  if (algos.empty()) throw Error(ErrorKind::InvalidArgument, "--algos is empty");
  const SolverConfig base = to_config(flags);

  const SyntheticData data =
      gen_synthetic({sf.n, sf.r, sf.sigma, parse_noise_dist(sf.noise), flags.seed});
  const fs::path dir = prepare_dir(flags.out_dir);
  Manifest m{"synth", argv, config_json(base)};
  m.inputs = {{"n", sf.n}, {"r", sf.r}, {"sigma", sf.sigma}, {"noise", sf.noise},
              {"algos", sf.algos}};
  if (sf.save_matrix) {
    io::write_matrix(dir / "X.txt", data.x.entries());
    m.outputs["matrix"] = (dir / "X.txt").string();
  }

  json summary = json::array();
  std::ostringstream table;
  table << std::left << std::setw(10) << "algo" << std::setw(11) << "status" << std::right
        << std::setw(8) << "iters" << std::setw(14) << "final_E" << std::setw(14)
        << "rel_consensus" << std::setw(12) << "lambda" << std::setw(10) << "seconds"
        << std::setw(12) << "log10_rate" << '\n';
  bool degenerate = false;
  for (Algorithm a : algos) {
    SolverConfig cfg = base;
    cfg.algorithm = a;
    const SolverResult res = run(data.x, cfg);
    const std::string name(to_string(a));
    const fs::path trace_path = dir / ("trace_" + name + ".csv");
    io::write_trace_csv(trace_path, res.trace);
    m.outputs["trace_" + name] = trace_path.string();
    degenerate = degenerate || res.status == Status::Degenerate;

    const TraceRecord& last = res.trace.back();
    const double vn = res.v_final.matrix().norm();
    const double rel = vn > 0.0 ? last.consensus / vn : 0.0;
    const double rate = fitted_log_rate(res.trace);
    table << std::left << std::setw(10) << name << std::setw(11) << to_string(res.status)
          << std::right << std::setw(8) << res.iterations << std::setw(14) << std::scientific
          << std::setprecision(4) << last.E << std::setw(14) << rel << std::setw(12) << last.lambda
          << std::setw(10) << std::fixed << std::setprecision(3) << last.elapsed << std::setw(12)
          << std::scientific << std::setprecision(2) << rate << '\n'
          << std::defaultfloat;
    summary.push_back({{"algorithm", name},
                       {"status", std::string(to_string(res.status))},
                       {"iterations", res.iterations},
                       {"final_E", last.E},
                       {"rel_consensus", rel},
                       {"lambda", last.lambda},
                       {"seconds", last.elapsed},
                       {"log10_rate", std::isfinite(rate) ? json(rate) : json(nullptr)}});
  }

  {
    std::ofstream st(dir / "summary.txt");
    st << table.str();
  }
  m.outputs["summary"] = (dir / "summary.txt").string();
  if (flags.json_summary) {
    write_json(dir / "summary.json", summary);
    m.outputs["summary_json"] = (dir / "summary.json").string();
  }
  m.write(dir);
  out << table.str();
  return degenerate ? kExitNotConverged : kExitOk;
}

// ---------------------------------------------------------------- cluster

struct ClusterFlags {
  std::string features;
  std::string similarity;
  std::string labels;
  bool planted = false;
  long n = 60;
  int k = 3;
  double p_in = 0.9;
  double p_out = 0.1;
  int knn = 7;
};

int cmd_cluster(const ClusterFlags& cf, const SolverFlags& flags,
                const std::vector<std::string>& argv, std::ostream& out) {
  const int sources = int(!cf.features.empty()) + int(!cf.similarity.empty()) + int(cf.planted);
  if (sources != 1) {
    throw Error(ErrorKind::InvalidArgument,
                "give exactly one of --features, --similarity or --planted");
  }
  Manifest m{"cluster", argv};
  std::optional<ClusterProblem> problem;
  if (cf.planted) {
    problem = gen_planted_clusters(cf.n, cf.k, cf.p_in, cf.p_out, flags.seed);
    m.inputs = {{"planted", true}, {"n", cf.n}, {"k", cf.k}, {"p_in", cf.p_in},
                {"p_out", cf.p_out}};
  } else {
    if (cf.labels.empty()) throw Error(ErrorKind::InvalidArgument, "--labels is required");
    std::vector<int> truth = io::read_labels(cf.labels);
    SymmetricMatrix sim =
        cf.features.empty() ? SymmetricMatrix::make(io::read_matrix(cf.similarity))
                            : build_similarity(io::read_matrix(cf.features), cf.knn);
    if (static_cast<Index>(truth.size()) != sim.n()) {
      throw Error(ErrorKind::LengthMismatch, "labels file has " + std::to_string(truth.size()) +
                                                 " entries, matrix has " +
                                                 std::to_string(sim.n()) + " rows");
    }
    std::vector<int> distinct = truth;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    problem = ClusterProblem{std::move(sim), std::move(truth), static_cast<int>(distinct.size())};
    m.inputs = {{"labels", cf.labels}};
    if (!cf.features.empty()) {
      m.inputs["features"] = cf.features;
      m.inputs["knn"] = cf.knn;
    } else {
      m.inputs["similarity"] = cf.similarity;
    }
  }

  SolverFlags fl = flags;
  fl.rank = problem->k_classes;
  const SolverConfig cfg = to_config(fl);
  m.config = config_json(cfg);
  const ClusterOutcome result = run_clustering(*problem, cfg);

  const fs::path dir = prepare_dir(flags.out_dir);
  io::write_labels(dir / "predictions.txt", result.labels);
  io::write_matrix(dir / "U.csv", result.solve.u_final.matrix());
  m.outputs = {{"predictions", (dir / "predictions.txt").string()},
               {"U", (dir / "U.csv").string()}};
  if (flags.json_summary) {
    write_json(dir / "summary.json", {{"accuracy", result.accuracy},
                                      {"k", problem->k_classes},
                                      {"n", problem->similarity.n()},
                                      {"status", std::string(to_string(result.solve.status))}});
    m.outputs["summary_json"] = (dir / "summary.json").string();
  }
  m.write(dir);
  out << "accuracy " << std::setprecision(6) << result.accuracy << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const VerifyOptions& opts, std::ostream& out) {
  const std::vector<CheckResult> checks = run_verification(opts);
  bool ok = true;
  for (const CheckResult& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(22) << c.name << c.detail
        << '\n';
    ok = ok && c.passed;
  }
  out << (ok ? "all checks passed" : "some checks FAILED") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- rerun

int cmd_rerun(const std::string& manifest_path, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + manifest_path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("manifest: ") + e.what());
  }
  if (!j.contains("argv") || !j["argv"].is_array()) {
    throw Error(ErrorKind::ParseError, "manifest has no argv array");
  }
  std::vector<std::string> args;
  const auto stored = j["argv"].get<std::vector<std::string>>();
  for (std::size_t i = 0; i < stored.size(); ++i) {
    if (!out_dir.empty() && stored[i] == "--out-dir") {
      ++i;
      continue;
    }
    if (!out_dir.empty() && stored[i].rfind("--out-dir=", 0) == 0) continue;
    args.push_back(stored[i]);
  }
  if (!out_dir.empty()) {
    args.push_back("--out-dir");
    args.push_back(out_dir);
  }
  if (!args.empty() && args.front() == "rerun") {
    throw Error(ErrorKind::InvalidArgument, "manifest refers to another rerun");
  }
  return run(args, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric nonnegative matrix factorization toolkit", "symnmf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SolverFlags factorize_flags;
  std::string matrix_path;
  auto* factorize = app.add_subcommand("factorize", "factorize a symmetric matrix");
  factorize->add_option("matrix", matrix_path, "dense text or .csv matrix")->required();
  add_solver_flags(factorize, factorize_flags, true, true);

  SolverFlags synth_flags;
  SynthFlags sf;
  auto* synth = app.add_subcommand("synth", "synthetic benchmark X = U*U*^T + sigma |N|");
  synth->add_option("--n", sf.n, "matrix size")->capture_default_str();
  synth->add_option("--r", sf.r, "planted and factorization rank")->capture_default_str();
  synth->add_option("--sigma", sf.sigma, "noise level")->capture_default_str();
  synth->add_option("--noise", sf.noise, "gaussian | uniform | lognormal")->capture_default_str();
  synth->add_option("--algos", sf.algos, "comma-separated algorithms")->capture_default_str();
  synth->add_flag("--save-matrix", sf.save_matrix, "write the generated X");
  add_solver_flags(synth, synth_flags, false, false);

  SolverFlags cluster_flags;
  ClusterFlags cf;
  auto* cluster = app.add_subcommand("cluster", "graph clustering via symmetric NMF");
  cluster->add_option("--features", cf.features, "feature CSV, one row per item");
  cluster->add_option("--similarity", cf.similarity, "precomputed similarity matrix");
  cluster->add_flag("--planted", cf.planted, "use a planted-cluster similarity");
  cluster->add_option("--labels", cf.labels, "true labels, one integer per line");
  cluster->add_option("--knn", cf.knn, "self-tuning neighbour count")->capture_default_str();
  cluster->add_option("--n", cf.n, "planted: items")->capture_default_str();
  cluster->add_option("--k", cf.k, "planted: classes")->capture_default_str();
  cluster->add_option("--p-in", cf.p_in, "planted: within-class weight")->capture_default_str();
  cluster->add_option("--p-out", cf.p_out, "planted: cross-class weight")->capture_default_str();
  add_solver_flags(cluster, cluster_flags, true, false);

  VerifyOptions vo;
  bool debug = false;
  auto* verify = app.add_subcommand("verify", "run the descent-lemma invariant suite");
  verify->add_option("--seed", vo.seed, "first seed")->capture_default_str();
  verify->add_option("--seeds", vo.seeds, "number of seeds")->capture_default_str();
  verify->add_option("--n", vo.n, "instance size")->capture_default_str();
  verify->add_option("--r", vo.r, "rank")->capture_default_str();
  verify->add_option("--sigma", vo.sigma, "noise level")->capture_default_str();
  verify->add_option("--max-iters", vo.max_iters, "iterations per run")->capture_default_str();
  verify->add_flag("--debug", debug, "enable debug-only flags");
  verify->add_option("--lambda-override", vo.lambda_override,
                     "debug: lambda used by the updates (checks keep the scheduled one)");

  std::string manifest_path, rerun_dir;
  auto* rerun = app.add_subcommand("rerun", "replay the command recorded in a manifest");
  rerun->add_option("manifest", manifest_path, "manifest.json")->required();
  rerun->add_option("--out-dir", rerun_dir, "write outputs here instead");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*factorize) return cmd_factorize(matrix_path, factorize_flags, args, out);
    if (*synth) return cmd_synth(sf, synth_flags, args, out);
    if (*cluster) return cmd_cluster(cf, cluster_flags, args, out);
    if (*verify) {
      if (vo.lambda_override && !debug) {
        throw Error(ErrorKind::InvalidArgument, "--lambda-override requires --debug");
      }
      if (vo.seeds < 1) throw Error(ErrorKind::InvalidArgument, "--seeds must be >= 1");
      return cmd_verify(vo, out);
    }
    if (*rerun) return cmd_rerun(manifest_path, rerun_dir, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace symnmf::cli
