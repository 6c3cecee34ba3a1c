#ifndef UOS_IO_HPP
#define UOS_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "uos/core.hpp"

namespace uos {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<double> parse_numeric_line(const std::string& line, const std::string& where,
                                              int lineno) {
  std::vector<double> out;
  std::string field;
  std::istringstream ls(line);
  // delimiters: whitespace or commas
  std::string cleaned = line;
  for (char& c : cleaned)
    if (c == ',' || c == '\t') c = ' ';
  std::istringstream fs(cleaned);
  while (fs >> field) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(field, &pos);
      if (pos != field.size()) throw std::invalid_argument(field);
      out.push_back(v);
    } catch (const std::exception&) {
      throw IoError(where + " line " + std::to_string(lineno) + ": cannot parse numeric field '" +
                    field + "'");
    }
  }
  return out;
}

inline std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// One matrix row per line; fields separated by spaces, tabs or commas.
inline MatrixXd load_matrix_text(std::istream& in, const std::string& where = "<stream>") {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto vals = detail::parse_numeric_line(line, where, lineno);
    if (vals.empty()) continue;
    if (!rows.empty() && vals.size() != rows.front().size())
      throw IoError(where + " line " + std::to_string(lineno) + ": expected " +
                    std::to_string(rows.front().size()) + " fields, got " +
                    std::to_string(vals.size()));
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw IoError(where + ": no data rows");
  MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  if (!all_finite(m)) throw IoError(where + ": non-finite entry");
  return m;
}

inline MatrixXd load_matrix_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  return load_matrix_text(f, path);
}

/// Complex matrices use two adjacent numeric columns (re, im) per entry.
inline MatrixXcd load_matrix_complex_text(std::istream& in,
                                          const std::string& where = "<stream>") {
  MatrixXd raw = load_matrix_text(in, where);
  if (raw.cols() % 2 != 0)
    throw IoError(where + ": complex matrix needs an even column count (re,im pairs)");
  MatrixXcd m(raw.rows(), raw.cols() / 2);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = {raw(i, 2 * j), raw(i, 2 * j + 1)};
  return m;
}

inline MatrixXcd load_matrix_complex_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  return load_matrix_complex_text(f, path);
}

inline void save_matrix_text(std::ostream& out, const MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << detail::fmt_full(m(i, j));
    }
    out << '\n';
  }
}

inline void save_matrix_text(std::ostream& out, const MatrixXcd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << detail::fmt_full(m(i, j).real()) << ' ' << detail::fmt_full(m(i, j).imag());
    }
    out << '\n';
  }
}

template <class Mat>
void save_matrix_text_file(const std::string& path, const Mat& m) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  save_matrix_text(f, m);
}

}  // namespace uos

#endif  // UOS_IO_HPP
