#pragma once

// Minimal RFC 4180 CSV: comma separator, `"`-quoted fields with `""` escapes,
// LF or CRLF line endings. Quoted fields may span lines; reported line numbers
// are those of the first physical line of the record.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "vqr/error.hpp"

namespace vqr::csv {

struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

class Reader {
 public:
  Reader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  // Returns false at end of input.
  bool next(Record& out) {
    out.fields.clear();
    int c = in_.get();
    if (c == std::char_traits<char>::eof()) return false;
    ++line_;
    out.line = line_;
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    for (;; c = in_.get()) {
      if (c == std::char_traits<char>::eof()) {
        if (quoted) throw ParseError(name_, out.line, out.fields.size() + 1, "unterminated quoted field");
        out.fields.push_back(std::move(field));
        return true;
      }
      const char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
            after_quote = true;
          }
        } else {
          if (ch == '\n') ++line_;
          field.push_back(ch);
        }
        continue;
      }
      if (ch == ',') {
        out.fields.push_back(std::move(field));
        field.clear();
        after_quote = false;
      } else if (ch == '\n') {
        out.fields.push_back(std::move(field));
        return true;
      } else if (ch == '\r') {
        if (in_.peek() == '\n') continue;
        throw ParseError(name_, out.line, out.fields.size() + 1, "bare carriage return");
      } else if (ch == '"') {
        if (!field.empty() || after_quote) {
          throw ParseError(name_, out.line, out.fields.size() + 1, "unexpected quote inside unquoted field");
        }
        quoted = true;
      } else {
        if (after_quote) {
          throw ParseError(name_, out.line, out.fields.size() + 1, "characters after closing quote");
        }
        field.push_back(ch);
      }
    }
  }

 private:
  std::istream& in_;
  std::string name_;
  std::size_t line_ = 0;
};

inline std::string escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << escape(fields[i]);
  }
  os << '\n';
}

// Fixed-point rendering independent of locale and platform printf.
inline std::string format_fixed(double value, int precision = 6) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
  if (ec != std::errc{}) throw Error("cannot format number");
  std::string out(buf, ptr);
  // "-0.000000" would make outputs depend on the sign of a zero
  if (out.find_first_not_of("-0.") == std::string::npos && !out.empty() && out.front() == '-') out.erase(0, 1);
  return out;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

inline std::optional<double> parse_double(std::string_view text) {
  double value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

// Reads a whole table and checks the header against the expected prefix.
// Rows must have exactly as many fields as the header.
class Table {
 public:
  std::string name;
  std::vector<std::string> header;
  std::vector<Record> rows;

  std::size_t column(std::string_view col) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == col) return i;
    throw ParseError(name, 1, 0, "missing column '" + std::string(col) + "'");
  }
};

inline Table read_table(std::istream& in, std::string name, const std::vector<std::string>& required_prefix) {
  Table table;
  table.name = name;
  Reader reader(in, std::move(name));
  Record rec;
  if (!reader.next(rec)) throw ParseError(table.name, 1, 0, "missing header row");
  if (!rec.fields.empty() && rec.fields[0].starts_with("\xEF\xBB\xBF")) rec.fields[0].erase(0, 3);
  table.header = std::move(rec.fields);
  if (table.header.size() < required_prefix.size()) {
    throw ParseError(table.name, 1, table.header.size() + 1,
                     "header has " + std::to_string(table.header.size()) + " columns, expected at least " +
                         std::to_string(required_prefix.size()));
  }
  for (std::size_t i = 0; i < required_prefix.size(); ++i) {
    if (table.header[i] != required_prefix[i]) {
      throw ParseError(table.name, 1, i + 1,
                       "expected column '" + required_prefix[i] + "', found '" + table.header[i] + "'");
    }
  }
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // blank line
    if (rec.fields.size() != table.header.size()) {
      throw ParseError(table.name, rec.line, std::min(rec.fields.size(), table.header.size()) + 1,
                       "expected " + std::to_string(table.header.size()) + " fields, found " +
                           std::to_string(rec.fields.size()));
    }
    table.rows.push_back(std::move(rec));
    rec = Record{};
  }
  return table;
}

inline Table read_table_file(const std::string& path, const std::vector<std::string>& required_prefix) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_table(in, path, required_prefix);
}

}  // namespace vqr::csv
