#include "symnmf/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "symnmf/errors.hpp"

namespace symnmf::io {

namespace {

double parse_double(std::string_view token, std::size_t line_no) {
  // std::from_chars for double is available in libstdc++ >= 11.
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line_no) + ": bad number '" + std::string(token) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

Matrix read_dense_text(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  long rows = -1, cols = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream hs(line);
    if (!(hs >> rows >> cols) || rows < 0 || cols < 0) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) +
                                             ": expected header 'n m'");
    }
    break;
  }
  if (rows < 0) throw Error(ErrorKind::ParseError, "empty matrix file");

  Matrix m(rows, cols);
  long r = 0;
  while (r < rows && std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    long c = 0;
    while (ls >> tok) {
      if (c >= cols) {
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(line_no) + ": more than " + std::to_string(cols) +
                        " values");
      }
      m(r, c++) = parse_double(tok, line_no);
    }
    if (c != cols) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(cols) + " values, got " +
                                             std::to_string(c));
    }
    ++r;
  }
  if (r != rows) {
    throw Error(ErrorKind::ParseError,
                "expected " + std::to_string(rows) + " rows, got " + std::to_string(r));
  }
  return m;
}

void write_dense_text(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
}

Matrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const auto field = trim(body.substr(start, comma == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : comma - start));
      row.push_back(parse_double(field, line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) +
                                             ": ragged row (" + std::to_string(row.size()) +
                                             " vs " + std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  const Index n = static_cast<Index>(rows.size());
  const Index m = n ? static_cast<Index>(rows.front().size()) : 0;
  Matrix out(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) out(i, j) = rows[i][j];
  return out;
}

void write_csv(std::ostream& out, const Matrix& m) {
  out << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

Matrix read_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return path.extension() == ".csv" ? read_csv(in) : read_dense_text(in);
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  if (path.extension() == ".csv") {
    write_csv(out, m);
  } else {
    write_dense_text(out, m);
  }
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty()) continue;
    int value = 0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad label '" +
                                             std::string(body) + "'");
    }
    labels.push_back(value);
  }
  return labels;
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  auto out = open_out(path);
  for (int l : labels) out << l << '\n';
}

}  // namespace symnmf::io
