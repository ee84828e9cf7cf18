#pragma once

// Key-value configuration in a TOML subset: `[section.sub]` headers (parts may
// be double-quoted), `key = value` lines where value is a number, a
// double-quoted string, `true`/`false`, or a flat array `[v, v, ...]`.
// `#` starts a comment outside strings.

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "vqr/csv.hpp"
#include "vqr/error.hpp"

namespace vqr::config {

using Scalar = std::variant<double, std::string, bool>;

struct Value {
  std::vector<Scalar> items;  // one item for scalars
  bool is_array = false;
  std::size_t line = 0;
};

struct Section {
  std::vector<std::string> path;
  std::size_t line = 0;
  std::vector<std::pair<std::string, Value>> entries;  // file order

  const Value* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
};

struct Document {
  std::string name;
  std::vector<Section> sections;  // sections[0] is the root (empty path)

  const Section* find(const std::vector<std::string>& path) const {
    for (const auto& s : sections)
      if (s.path == path) return &s;
    return nullptr;
  }

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + what);
  }

  double number(const Value& v, const std::string& key) const {
    if (v.is_array || !std::holds_alternative<double>(v.items.front())) fail(v.line, "'" + key + "' must be a number");
    return std::get<double>(v.items.front());
  }

  std::string string(const Value& v, const std::string& key) const {
    if (v.is_array || !std::holds_alternative<std::string>(v.items.front())) fail(v.line, "'" + key + "' must be a string");
    return std::get<std::string>(v.items.front());
  }

  bool boolean(const Value& v, const std::string& key) const {
    if (v.is_array || !std::holds_alternative<bool>(v.items.front())) fail(v.line, "'" + key + "' must be true or false");
    return std::get<bool>(v.items.front());
  }

  std::vector<double> numbers(const Value& v, const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : v.items) {
      if (!std::holds_alternative<double>(item)) fail(v.line, "'" + key + "' must contain numbers");
      out.push_back(std::get<double>(item));
    }
    return out;
  }

  std::vector<std::string> strings(const Value& v, const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& item : v.items) {
      if (!std::holds_alternative<std::string>(item)) fail(v.line, "'" + key + "' must contain strings");
      out.push_back(std::get<std::string>(item));
    }
    return out;
  }
};

namespace detail {

class LineParser {
 public:
  LineParser(const std::string& text, const std::string& name, std::size_t line)
      : text_(text), name_(name), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string key() {
    skip_ws();
    if (peek('"')) return quoted();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-'))
      ++pos_;
    if (start == pos_) fail("expected a key");
    return text_.substr(start, pos_ - start);
  }

  Scalar scalar() {
    skip_ws();
    if (peek('"')) return quoted();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '#' &&
           text_[pos_] != ' ' && text_[pos_] != '\t')
      ++pos_;
    std::string token = text_.substr(start, pos_ - start);
    if (token == "true") return true;
    if (token == "false") return false;
    std::string cleaned;
    for (char c : token)
      if (c != '_') cleaned.push_back(c);
    if (!cleaned.empty() && cleaned.front() == '+') cleaned.erase(0, 1);
    if (auto d = csv::parse_double(cleaned)) return *d;
    fail("cannot parse value '" + token + "'");
  }

  Value value() {
    Value v;
    v.line = line_;
    if (peek('[')) {
      ++pos_;
      v.is_array = true;
      while (!peek(']')) {
        v.items.push_back(scalar());
        if (peek(',')) ++pos_;
        else if (!peek(']')) fail("expected ',' or ']'");
      }
      ++pos_;
    } else {
      v.items.push_back(scalar());
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(name_ + ":" + std::to_string(line_) + ": " + what);
  }

 private:
  std::string quoted() {
    expect('"');
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out.push_back(text_[pos_++]);
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  const std::string& text_;
  const std::string& name_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Document parse(std::istream& in, std::string name) {
  Document doc;
  doc.name = std::move(name);
  doc.sections.push_back(Section{});
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    detail::LineParser p(line, doc.name, lineno);
    if (p.at_end()) continue;
    if (p.peek('[')) {
      p.expect('[');
      Section s;
      s.line = lineno;
      s.path.push_back(p.key());
      while (p.peek('.')) {
        p.expect('.');
        s.path.push_back(p.key());
      }
      p.expect(']');
      if (!p.at_end()) p.fail("trailing characters after section header");
      if (doc.find(s.path)) p.fail("duplicate section");
      doc.sections.push_back(std::move(s));
      continue;
    }
    std::string key = p.key();
    p.expect('=');
    Value v = p.value();
    if (!p.at_end()) p.fail("trailing characters after value");
    auto& section = doc.sections.back();
    if (section.find(key)) p.fail("duplicate key '" + key + "'");
    section.entries.emplace_back(std::move(key), std::move(v));
  }
  return doc;
}

inline Document parse_string(const std::string& text, std::string name = "<string>") {
  std::istringstream in(text);
  return parse(in, std::move(name));
}

inline Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse(in, path);
}

}  // namespace vqr::config
