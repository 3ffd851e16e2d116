#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "symnmf/matcore.hpp"

namespace symnmf::io {

// Plain-text dense format: a header line "n m" followed by n rows of m
// whitespace-separated decimals. Values are written with 17 significant
// digits so doubles round-trip exactly.
Matrix read_dense_text(std::istream& in);
void write_dense_text(std::ostream& out, const Matrix& m);

// Comma-separated, one row per line, no header.
Matrix read_csv(std::istream& in);
void write_csv(std::ostream& out, const Matrix& m);

// Dispatch on extension: ".csv" is CSV, anything else the dense text format.
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

// One integer per line; blank lines ignored.
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

}  // namespace symnmf::io
