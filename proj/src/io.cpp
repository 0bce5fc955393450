#include "hyperreg/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace hyperreg {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& tok, const std::string& path, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail(path, line, "invalid number '" + tok + "'");
  if (!std::isfinite(v)) fail(path, line, "non-finite number '" + tok + "'");
  return v;
}

std::size_t parse_index(const std::string& tok, const std::string& path, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) fail(path, line, "invalid integer '" + tok + "'");
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open file");
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) fail(path, 1, "empty file, expected a %%MatrixMarket banner");
  ++lineno;
  const auto banner = tokens(line);
  if (banner.empty() || banner[0] != "%%MatrixMarket") fail(path, lineno, "missing %%MatrixMarket banner");
  if (banner.size() != 5 || lower(banner[1]) != "matrix") fail(path, lineno, "malformed banner");
  if (lower(banner[2]) != "coordinate") {
    throw FormatError(path + ":" + std::to_string(lineno) + ": unsupported layout '" + banner[2] +
                      "', only 'coordinate' is accepted");
  }
  if (lower(banner[3]) != "real" || lower(banner[4]) != "general") {
    throw FormatError(path + ":" + std::to_string(lineno) + ": unsupported field/symmetry '" + banner[3] + " " +
                      banner[4] + "', only 'real general' is accepted");
  }

  std::size_t rows = 0, cols = 0, entries = 0;
  bool have_size = false;
  std::vector<Triplet> triplets;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line) || line[0] == '%') continue;
    const auto t = tokens(line);
    if (!have_size) {
      if (t.size() != 3) fail(path, lineno, "expected size line 'rows cols nnz'");
      rows = parse_index(t[0], path, lineno);
      cols = parse_index(t[1], path, lineno);
      entries = parse_index(t[2], path, lineno);
      have_size = true;
      triplets.reserve(entries);
      continue;
    }
    if (t.size() != 3) fail(path, lineno, "expected entry 'row col value'");
    const std::size_t i = parse_index(t[0], path, lineno);
    const std::size_t j = parse_index(t[1], path, lineno);
    if (i < 1 || i > rows || j < 1 || j > cols) {
      fail(path, lineno, "entry (" + t[0] + "," + t[1] + ") outside " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    }
    if (triplets.size() == entries) fail(path, lineno, "more entries than the declared " + std::to_string(entries));
    triplets.push_back({i - 1, j - 1, parse_real(t[2], path, lineno)});
  }
  if (!have_size) fail(path, lineno, "missing size line");
  if (triplets.size() != entries) {
    fail(path, lineno, "declared " + std::to_string(entries) + " entries, found " + std::to_string(triplets.size()));
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

void write_matrix_market(const std::string& path, const SparseMatrix& A) {
  std::ostringstream out;
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.n_rows() << ' ' << A.n_cols() << ' ' << A.nnz() << '\n';
  for (std::size_t i = 0; i < A.n_rows(); ++i) {
    const auto cols = A.row_cols(i);
    const auto vals = A.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out << (i + 1) << ' ' << (cols[k] + 1) << ' ' << format_double(vals[k]) << '\n';
    }
  }
  write_file_atomic(path, out.str());
}

DenseVector read_vector(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = tokens(line);
    if (t.empty()) continue;
    if (t.size() != 1) fail(path, lineno, "expected one value per line");
    values.push_back(parse_real(t[0], path, lineno));
  }
  return DenseVector(std::move(values));
}

void write_vector(const std::string& path, const DenseVector& v) {
  std::string out;
  for (double x : v.values()) out += format_double(x) + '\n';
  write_file_atomic(path, out);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw IoError(tmp + ": write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path + ": rename failed: " + ec.message());
}

}  // namespace hyperreg
