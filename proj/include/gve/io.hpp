#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gve/dense_matrix.hpp"
#include "gve/error.hpp"
#include "gve/simulation.hpp"

namespace gve {

inline constexpr std::string_view kReportSchemaLine = "# schema=1";
inline constexpr std::string_view kReportHeader =
    "method,n,p,alpha,beta_norm,sigma2_true,trial,sigma2_hat,window_L,runtime_us,seed,status";

// Locale-independent shortest-exact formatting at up to 17 significant digits.
inline std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view token, std::size_t line, std::size_t column) {
  const auto t = trim(token);
  if (t.empty()) throw FormatError("empty field", line, column);
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  double value = 0;
  const auto res = std::from_chars(begin, t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw FormatError("non-numeric token '" + std::string(t) + "'", line, column);
  if (!std::isfinite(value)) throw FormatError("non-finite value", line, column);
  return value;
}

}  // namespace detail

// Comma-separated rows, no header. Blank lines are ignored.
inline DenseMatrix parse_matrix(std::istream& in) {
  std::vector<double> data;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::size_t fields = 0, start = 0;
    const std::string_view view(line);
    while (true) {
      const auto comma = view.find(',', start);
      const auto token = view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      data.push_back(detail::parse_real(token, line_no, fields + 1));
      ++fields;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0)
      cols = fields;
    else if (fields != cols)
      throw FormatError("ragged row: expected " + std::to_string(cols) + " fields, found " + std::to_string(fields),
                        line_no);
    ++rows;
  }
  if (rows == 0) throw FormatError("matrix file is empty", 0);
  return DenseMatrix(rows, cols, std::move(data));
}

// One value per line. Blank lines are ignored.
inline std::vector<double> parse_vector(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    out.push_back(detail::parse_real(line, line_no, 1));
  }
  if (out.empty()) throw FormatError("vector file is empty", 0);
  return out;
}

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

inline DenseMatrix load_matrix(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_matrix(in);
}

inline std::vector<double> load_vector(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_vector(in);
}

inline void write_matrix(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
}

inline void write_vector(std::ostream& out, std::span<const double> v) {
  for (double x : v) out << format_real(x) << '\n';
}

inline void save_matrix(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  write_matrix(out, m);
}

inline void save_vector(const std::string& path, std::span<const double> v) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  write_vector(out, v);
}

// Status text with CSV separators and line breaks neutralized.
inline std::string sanitize_status(std::string_view status) {
  std::string out(status);
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return out;
}

inline void write_report(std::ostream& out, std::span<const ReportRow> rows) {
  out << kReportSchemaLine << '\n' << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << r.n << ',' << r.p << ',' << format_real(r.alpha) << ',' << format_real(r.beta_norm) << ','
        << format_real(r.sigma2_true) << ',' << r.trial << ',' << format_real(r.sigma2_hat) << ',' << r.window_length
        << ',' << r.runtime_us << ',' << r.seed << ',' << sanitize_status(r.status) << '\n';
  }
}

inline void write_summary(std::ostream& out, std::span<const CellSummary> cells) {
  out << "method,n,p,alpha,beta_norm,sigma2_true,count,failures,mean_error,bias,std_dev,median_relative_error\n";
  for (const auto& s : cells) {
    out << s.method << ',' << s.n << ',' << s.p << ',' << format_real(s.alpha) << ',' << format_real(s.beta_norm) << ','
        << format_real(s.sigma2_true) << ',' << s.count << ',' << s.failures << ',' << format_real(s.mean_error) << ','
        << format_real(s.bias) << ',' << format_real(s.std_dev) << ',' << format_real(s.median_relative_error) << '\n';
  }
}

}  // namespace gve
