#include "risid/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "risid/errors.hpp"

namespace risid::config {

namespace {

std::string at_line(int line) { return "line " + std::to_string(line) + ": "; }

bool is_bare_key_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-';
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  int line() const { return line_; }
  bool done() const { return pos_ >= s_.size(); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  // Whitespace, newlines and comments, as allowed inside an array.
  void skip_ws_multiline() {
    for (;;) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '#')
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '\n' || s_[pos_] == '\r')) {
        if (s_[pos_] == '\n') new_line();
        ++pos_;
        continue;
      }
      return;
    }
  }
  // True at a comment, line break or end of input.
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#' || s_[pos_] == '\n' || s_[pos_] == '\r';
  }
  void next_line() {
    while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
    if (pos_ < s_.size()) {
      ++pos_;
      new_line();
    }
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool consume(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(at_line(line_) + what + " at column " + std::to_string(pos_ - line_start_ + 1));
  }

  std::string bare_key() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (is_bare_key_char(s_[pos_]) || s_[pos_] == '.')) ++pos_;
    if (start == pos_) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  Value value() {
    skip_ws();
    Value v;
    v.line = line_;
    const char c = peek();
    if (c == '"') {
      v.kind = Value::Kind::String;
      v.text = string_literal();
      return v;
    }
    if (c == '[') {
      ++pos_;
      v.kind = Value::Kind::Array;
      skip_ws_multiline();
      if (consume(']')) return v;
      for (;;) {
        skip_ws_multiline();
        v.items.push_back(value());
        skip_ws_multiline();
        if (consume(']')) break;
        expect(',');
        skip_ws_multiline();
        if (consume(']')) break;  // trailing comma
      }
      return v;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' &&
           s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '\n' && s_[pos_] != '\r')
      ++pos_;
    std::string token(s_.substr(start, pos_ - start));
    if (token.empty()) fail("expected a value");
    if (token == "true" || token == "false") {
      v.kind = Value::Kind::Bool;
      v.boolean = token == "true";
      return v;
    }
    if (token == "inf" || token == "+inf" || token == "-inf") {
      v.kind = Value::Kind::Float;
      v.number = token[0] == '-' ? -std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::infinity();
      return v;
    }
    std::string digits;
    for (char ch : token)
      if (ch != '_') digits.push_back(ch);
    const bool is_float = digits.find_first_of(".eE") != std::string::npos;
    const char* first = digits.data() + (digits[0] == '+' ? 1 : 0);
    const char* last = digits.data() + digits.size();
    if (is_float) {
      v.kind = Value::Kind::Float;
      auto [ptr, ec] = std::from_chars(first, last, v.number);
      if (ec != std::errc() || ptr != last) fail("malformed number '" + token + "'");
    } else {
      v.kind = Value::Kind::Integer;
      auto [ptr, ec] = std::from_chars(first, last, v.integer);
      if (ec != std::errc() || ptr != last) fail("malformed value '" + token + "'");
    }
    return v;
  }

 private:
  std::string string_literal() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"' && s_[pos_] != '\n') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        const char e = s_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out.push_back(c);
    }
    if (pos_ >= s_.size() || s_[pos_] == '\n') fail("unterminated string");
    ++pos_;
    return out;
  }

  void new_line() {
    ++line_;
    line_start_ = pos_ + 1;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  int line_ = 1;
};

}  // namespace

const Value* Table::find(std::string_view key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

const Table* Document::table(std::string_view name) const {
  for (const auto& t : tables)
    if (!t.is_array_element && t.name == name) return &t;
  return nullptr;
}

std::vector<const Table*> Document::array(std::string_view name) const {
  std::vector<const Table*> out;
  for (const auto& t : tables)
    if (t.is_array_element && t.name == name) out.push_back(&t);
  return out;
}

Document parse(std::string_view text) {
  Document doc;
  doc.tables.push_back(Table{"", false, 0, {}});
  std::set<std::string> seen_tables;
  Cursor cur(text);
  for (; !cur.done(); cur.next_line()) {
    if (cur.at_end()) continue;
    const int line_no = cur.line();
    if (cur.consume('[')) {
      const bool is_array = cur.consume('[');
      std::string name = cur.bare_key();
      cur.expect(']');
      if (is_array) cur.expect(']');
      if (!cur.at_end()) cur.fail("trailing characters after table header");
      if (!is_array && !seen_tables.insert(name).second)
        throw ParseError(at_line(line_no) + "duplicate table [" + name + "]");
      doc.tables.push_back(Table{name, is_array, line_no, {}});
    } else {
      std::string key = cur.bare_key();
      cur.expect('=');
      Value v = cur.value();
      if (!cur.at_end()) cur.fail("trailing characters after value");
      Table& t = doc.tables.back();
      if (t.find(key)) throw ParseError(at_line(line_no) + "duplicate key '" + key + "'");
      t.entries.emplace_back(std::move(key), std::move(v));
    }
  }
  return doc;
}

double as_double(const Value& v, const std::string& field) {
  if (v.kind == Value::Kind::Float) return v.number;
  if (v.kind == Value::Kind::Integer) return static_cast<double>(v.integer);
  throw ValidationError(field + ": expected a number (" + at_line(v.line) + ")");
}

std::int64_t as_int(const Value& v, const std::string& field) {
  if (v.kind == Value::Kind::Integer) return v.integer;
  throw ValidationError(field + ": expected an integer (" + at_line(v.line) + ")");
}

TableReader::TableReader(const Table& table) : table_(table) {}

std::string TableReader::field(std::string_view key) const {
  if (table_.name.empty()) return std::string(key);
  return (table_.is_array_element ? "[[" + table_.name + "]]" : "[" + table_.name + "]") + "." +
         std::string(key);
}

bool TableReader::has(std::string_view key) const { return table_.find(key) != nullptr; }

const Value& TableReader::require(std::string_view key) {
  const Value* v = table_.find(key);
  if (!v) throw ValidationError(field(key) + ": required key missing");
  used_.insert(std::string(key));
  return *v;
}

const Value& TableReader::get_value(std::string_view key) { return require(key); }

double TableReader::get_double(std::string_view key) { return as_double(require(key), field(key)); }

double TableReader::get_double(std::string_view key, double fallback) {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t TableReader::get_int(std::string_view key) { return as_int(require(key), field(key)); }

std::int64_t TableReader::get_int(std::string_view key, std::int64_t fallback) {
  return has(key) ? get_int(key) : fallback;
}

bool TableReader::get_bool(std::string_view key, bool fallback) {
  if (!has(key)) return fallback;
  const Value& v = require(key);
  if (v.kind != Value::Kind::Bool) throw ValidationError(field(key) + ": expected true or false");
  return v.boolean;
}

std::string TableReader::get_string(std::string_view key) {
  const Value& v = require(key);
  if (v.kind != Value::Kind::String) throw ValidationError(field(key) + ": expected a string");
  return v.text;
}

std::string TableReader::get_string(std::string_view key, std::string_view fallback) {
  return has(key) ? get_string(key) : std::string(fallback);
}

void TableReader::finish() const {
  for (const auto& [k, v] : table_.entries)
    if (!used_.contains(k))
      throw ValidationError(field(k) + ": unknown key (" + at_line(v.line) + ")");
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace risid::config
