#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace anml::cli {

enum class Format { Csv, Json };
enum class Base { Nats, Bits };

/// Nats or bits, by base.
double in_base(double nats, Base base);
std::string unit_suffix(Base base);

/// %.12g with '.' as decimal separator; inf and nan spelled out.
std::string format_number(double x);

/// Ordered flat key/value row. Missing values print as an empty CSV cell and
/// as null in JSON.
class OutputRecord {
 public:
  using Value = std::variant<std::monostate, long long, double, std::string, bool>;

  OutputRecord& add(std::string key, Value value);
  OutputRecord& add(std::string key, int value) { return add(std::move(key), Value(static_cast<long long>(value))); }
  OutputRecord& add(std::string key, double value) { return add(std::move(key), Value(value)); }
  OutputRecord& add(std::string key, bool value) { return add(std::move(key), Value(value)); }
  OutputRecord& add(std::string key, const char* value) { return add(std::move(key), Value(std::string(value))); }
  OutputRecord& add(std::string key, const std::string& value) { return add(std::move(key), Value(value)); }
  OutputRecord& add_optional(std::string key, std::optional<double> value);

  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

/// CSV: one header line from the first record, then one line per record, then
/// the notes as '#' comment lines. JSON: an array of objects; notes dropped.
void write_records(std::ostream& out, Format format, const std::vector<OutputRecord>& records,
                   const std::vector<std::string>& notes = {});

}  // namespace anml::cli
