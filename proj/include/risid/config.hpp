#pragma once

// Reader for the subset of TOML used by scenario and sweep files:
// [table] and [[array-of-tables]] headers, `key = value` pairs with strings,
// booleans, integers, floats (including inf) and single-line arrays, and
// `#` comments. Lookups go through TableReader, which rejects unknown keys.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace risid::config {

struct Value {
  enum class Kind { Bool, Integer, Float, String, Array };
  Kind kind = Kind::Integer;
  bool boolean = false;
  std::int64_t integer = 0;
  double number = 0.0;
  std::string text;
  std::vector<Value> items;
  int line = 0;
};

struct Table {
  std::string name;  // empty for the root table
  bool is_array_element = false;
  int line = 0;
  std::vector<std::pair<std::string, Value>> entries;

  const Value* find(std::string_view key) const;
};

struct Document {
  std::vector<Table> tables;  // root first, then in file order

  const Table& root() const { return tables.front(); }
  // Single [name] table, or nullptr when absent.
  const Table* table(std::string_view name) const;
  std::vector<const Table*> array(std::string_view name) const;
};

Document parse(std::string_view text);

// Typed access that records which keys were used; finish() throws a
// ValidationError naming the first key nobody asked for.
class TableReader {
 public:
  explicit TableReader(const Table& table);

  bool has(std::string_view key) const;
  double get_double(std::string_view key);
  double get_double(std::string_view key, double fallback);
  std::int64_t get_int(std::string_view key);
  std::int64_t get_int(std::string_view key, std::int64_t fallback);
  bool get_bool(std::string_view key, bool fallback);
  std::string get_string(std::string_view key);
  std::string get_string(std::string_view key, std::string_view fallback);
  const Value& get_value(std::string_view key);
  void finish() const;

  std::string field(std::string_view key) const;

 private:
  const Value& require(std::string_view key);

  const Table& table_;
  std::set<std::string, std::less<>> used_;
};

double as_double(const Value& v, const std::string& field);
std::int64_t as_int(const Value& v, const std::string& field);

// Float formatting shared by writers: 17 significant digits, `inf` for
// infinity, and always a decimal point or exponent so values parse back as
// floats.
std::string format_double(double v);
std::string quote(std::string_view s);

}  // namespace risid::config
