#include "symnmf/trace_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "symnmf/errors.hpp"

namespace symnmf::io {

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << kTraceHeader << '\n' << std::setprecision(17);
  for (const TraceRecord& t : trace) {
    out << t.k << ',' << t.f_total << ',' << t.f_fit << ',' << t.f_penalty << ',' << t.E << ','
        << t.consensus << ',' << t.kkt << ',' << t.lambda << ',' << t.elapsed << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  write_trace_csv(out, trace);
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw Error(ErrorKind::ParseError, "trace csv: missing or unexpected header");
  }
  std::vector<TraceRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    TraceRecord t;
    if (!(ls >> t.k >> t.f_total >> t.f_fit >> t.f_penalty >> t.E >> t.consensus >> t.kkt >>
          t.lambda >> t.elapsed)) {
      throw Error(ErrorKind::ParseError, "trace csv: bad row '" + line + "'");
    }
    out.push_back(t);
  }
  return out;
}

void write_trace_json(std::ostream& out, const SolverResult& result, const RunMetadata& meta) {
  nlohmann::json j;
  j["metadata"] = {
      {"algorithm", std::string(to_string(meta.algorithm))},
      {"seed", meta.seed},
      {"n", meta.n},
      {"r", meta.r},
      {"inner_loops", meta.inner_loops},
      {"lambda_mode", std::string(to_string(meta.penalty.mode))},
      {"lambda0", meta.penalty.lambda0},
      {"margin", meta.penalty.margin},
  };
  if (meta.penalty.fixed_lambda) j["metadata"]["fixed_lambda"] = *meta.penalty.fixed_lambda;
  j["status"] = std::string(to_string(result.status));
  j["iterations"] = result.iterations;
  j["b0"] = result.b0;
  nlohmann::json rows = nlohmann::json::array();
  for (const TraceRecord& t : result.trace) {
    rows.push_back({{"k", t.k},
                    {"f_total", t.f_total},
                    {"f_fit", t.f_fit},
                    {"f_penalty", t.f_penalty},
                    {"E", t.E},
                    {"consensus", t.consensus},
                    {"kkt", t.kkt},
                    {"lambda", t.lambda},
                    {"elapsed", t.elapsed}});
  }
  j["trace"] = std::move(rows);
  out << j.dump(2) << '\n';
}

}  // namespace symnmf::io
