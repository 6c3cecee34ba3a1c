#ifndef UOS_TABLE_HPP
#define UOS_TABLE_HPP

#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace uos {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Comma-separated output table with a '#'-prefixed metadata header block.
/// Rows are stored pre-formatted so the emitted bytes depend only on the
/// inputs, never on locale or wall clock.
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_meta(const std::string& key, const std::string& value) {
    meta_.emplace_back(key, value);
  }

  class Row {
   public:
    explicit Row(std::size_t expect) { cells_.reserve(expect); }
    Row& add(const std::string& s) {
      cells_.push_back(s);
      return *this;
    }
    Row& add(const char* s) { return add(std::string(s)); }
    Row& add(double v) { return add(format_number(v)); }
    Row& add(long v) { return add(std::to_string(v)); }
    Row& add(int v) { return add(std::to_string(v)); }
    Row& add(bool v) { return add(std::string(v ? "1" : "0")); }
    const std::vector<std::string>& cells() const { return cells_; }

   private:
    std::vector<std::string> cells_;
  };

  Row make_row() const { return Row(columns_.size()); }

  void add_row(Row row) {
    if (row.cells().size() != columns_.size())
      throw std::runtime_error("ResultTable: row width does not match columns");
    rows_.push_back(std::move(row));
  }

  std::size_t row_count() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::string>& row(std::size_t i) const { return rows_[i].cells(); }

  /// Cell lookup by column name; throws if the column does not exist.
  const std::string& cell(std::size_t row_idx, const std::string& column) const {
    for (std::size_t c = 0; c < columns_.size(); ++c)
      if (columns_[c] == column) return rows_[row_idx].cells()[c];
    throw std::runtime_error("ResultTable: no column '" + column + "'");
  }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : meta_) out << "# " << k << ": " << v << "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (c) out << ',';
      out << columns_[c];
    }
    out << '\n';
    for (const auto& r : rows_) {
      const auto& cells = r.cells();
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c) out << ',';
        out << cells[c];
      }
      out << '\n';
    }
  }

  std::string to_string() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<Row> rows_;
};

}  // namespace uos

#endif  // UOS_TABLE_HPP
