#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "symnmf/solvers.hpp"

namespace symnmf::io {

inline constexpr const char* kTraceHeader = "k,f_total,f_fit,f_penalty,E,consensus,kkt,lambda,elapsed";

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);

// Parses a file written by write_trace_csv (header required).
std::vector<TraceRecord> read_trace_csv(std::istream& in);

struct RunMetadata {
  Algorithm algorithm = Algorithm::SymHALS;
  std::uint64_t seed = 0;
  Index n = 0;
  Index r = 0;
  int inner_loops = 1;
  PenaltySettings penalty;
};

// {"metadata": {...}, "status": ..., "iterations": ..., "b0": ..., "trace": [...]}
void write_trace_json(std::ostream& out, const SolverResult& result, const RunMetadata& meta);

}  // namespace symnmf::io
