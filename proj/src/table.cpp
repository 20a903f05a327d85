#include "ringsim/table.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "ringsim/types.hpp"

namespace ringsim {

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
  for (const auto& c : columns_) {
    if (c == "error") throw InvalidArgument("the error column is reserved");
  }
  columns_.push_back("error");
}

int Table::column_index(std::string_view name) const {
  for (int i = 0; i < column_count(); ++i) {
    if (columns_[i] == name) return i;
  }
  return -1;
}

int Table::add_row() {
  rows_.emplace_back(columns_.size());
  return row_count() - 1;
}

void Table::set(int row, std::string_view column, Cell value) {
  const int c = column_index(column);
  if (c < 0) throw InvalidArgument("unknown table column: " + std::string(column));
  set(row, c, std::move(value));
}

void Table::set(int row, int column, Cell value) {
  if (const double* d = std::get_if<double>(&value); d && !std::isfinite(*d)) {
    add_error(row, "non-finite " + columns_[column]);
    rows_[row][column] = std::monostate{};
    return;
  }
  rows_[row][column] = std::move(value);
}

void Table::add_error(int row, const std::string& message) {
  Cell& cell = rows_[row].back();
  if (auto* s = std::get_if<std::string>(&cell); s && !s->empty()) {
    *s += "; " + message;
  } else {
    cell = message;
  }
}

void Table::append(const Table& other) {
  if (other.columns_ != columns_) throw InvalidArgument("cannot append tables with different columns");
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

void Table::set_meta(const std::string& key, const std::string& value) {
  for (auto& kv : meta_) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  meta_.emplace_back(key, value);
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::string_view bytes) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(bytes);
  return os.str();
}

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const std::string* s = std::get_if<std::string>(&c)) return quote_csv(*s);
  return {};
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  out += "# schema: ";
  out += kTableSchema;
  out += "\n";
  for (const auto& [k, v] : table.meta()) out += "# " + k + ": " + one_line(v) + "\n";
  for (int c = 0; c < table.column_count(); ++c) {
    if (c) out += ',';
    out += table.columns()[c];
  }
  out += '\n';
  for (int r = 0; r < table.row_count(); ++r) {
    for (int c = 0; c < table.column_count(); ++c) {
      if (c) out += ',';
      out += cell_text(table.at(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json j;
  j["schema"] = kTableSchema;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.meta()) meta[k] = v;
  j["meta"] = meta;
  j["columns"] = table.columns();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int r = 0; r < table.row_count(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (int c = 0; c < table.column_count(); ++c) {
      const Cell& cell = table.at(r, c);
      const std::string& name = table.columns()[c];
      if (const double* d = std::get_if<double>(&cell)) {
        row[name] = *d;
      } else if (const long long* i = std::get_if<long long>(&cell)) {
        row[name] = *i;
      } else if (const std::string* s = std::get_if<std::string>(&cell)) {
        row[name] = *s;
      } else {
        row[name] = nullptr;
      }
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace ringsim
