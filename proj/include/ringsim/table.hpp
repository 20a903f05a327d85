#pragma once

// Result tables and their CSV/JSON serialization. Every table ends with an
// `error` column; non-finite numbers never reach the output, they become an
// empty cell plus a note in that column.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ringsim {

inline constexpr const char* kTableSchema = "ringsim-table/1";
inline constexpr const char* kVersion = "0.1.0";

using Cell = std::variant<std::monostate, double, long long, std::string>;

class Table {
 public:
  Table() = default;
  /// `columns` excludes the trailing error column, which is added here.
  explicit Table(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  int column_count() const { return static_cast<int>(columns_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }
  /// Index of a column, or −1.
  int column_index(std::string_view name) const;

  /// Appends an empty row and returns its index.
  int add_row();
  void set(int row, std::string_view column, Cell value);
  void set(int row, int column, Cell value);
  /// Appends to the row's error note ("; "-separated).
  void add_error(int row, const std::string& message);
  const Cell& at(int row, int column) const { return rows_[row][column]; }
  const std::vector<Cell>& row(int r) const { return rows_[r]; }
  /// Appends the rows of `other`, which must have identical columns.
  void append(const Table& other);

  /// Header-block entries, written as "# key: value" lines in insertion order.
  void set_meta(const std::string& key, const std::string& value);
  const std::vector<std::pair<std::string, std::string>>& meta() const { return meta_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// 64-bit FNV-1a, printed as 16 hex digits by hash_hex.
std::uint64_t fnv1a(std::string_view bytes);
std::string hash_hex(std::string_view bytes);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

}  // namespace ringsim
