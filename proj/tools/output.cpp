#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <ostream>

#include "anml/numerics.hpp"

namespace anml::cli {

double in_base(double nats, Base base) { return base == Base::Bits ? nats_to_bits(nats) : nats; }

std::string unit_suffix(Base base) { return base == Base::Bits ? "bits" : "nats"; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

OutputRecord& OutputRecord::add(std::string key, Value value) {
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

OutputRecord& OutputRecord::add_optional(std::string key, std::optional<double> value) {
  if (value) return add(std::move(key), Value(*value));
  return add(std::move(key), Value());
}

namespace {

std::string csv_cell(const OutputRecord::Value& value) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string quoted = "\"";
      for (char c : v) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + "\"";
    }
  };
  return std::visit(Visitor{}, value);
}

std::string json_value(const OutputRecord::Value& value) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return std::isfinite(v) ? format_number(v) : "null"; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return nlohmann::json(v).dump(); }
  };
  return std::visit(Visitor{}, value);
}

}  // namespace

void write_records(std::ostream& out, Format format, const std::vector<OutputRecord>& records,
                   const std::vector<std::string>& notes) {
  if (format == Format::Json) {
    out << "[";
    for (std::size_t r = 0; r < records.size(); ++r) {
      out << (r ? ",\n  {" : "\n  {");
      const auto& fields = records[r].fields();
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ", ";
        out << nlohmann::json(fields[i].first).dump() << ": " << json_value(fields[i].second);
      }
      out << "}";
    }
    out << (records.empty() ? "]\n" : "\n]\n");
    return;
  }
  if (!records.empty()) {
    const auto& first = records.front().fields();
    for (std::size_t i = 0; i < first.size(); ++i) out << (i ? "," : "") << first[i].first;
    out << '\n';
  }
  for (const auto& record : records) {
    const auto& fields = record.fields();
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_cell(fields[i].second);
    out << '\n';
  }
  for (const auto& note : notes) out << "# " << note << '\n';
}

}  // namespace anml::cli
