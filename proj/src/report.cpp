#include "hlz/report.hpp"

#include <fmt/format.h>

#include <cmath>

namespace hlz {

namespace {

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += fmt::format("\\u{:04x}", static_cast<int>(c));
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

// JSON has no NaN or infinity.
std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string csv_string(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_field(const Field& f) {
  struct V {
    std::string operator()(double v) const { return json_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return json_string(v); }
    std::string operator()(const NamedValues& v) const {
      std::string out = "{";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += json_string(v[i].first) + ":" + json_number(v[i].second);
      }
      return out + "}";
    }
  };
  return std::visit(V{}, f);
}

std::string csv_field(const Field& f) {
  struct V {
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return csv_string(v); }
    std::string operator()(const NamedValues& v) const {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ";";
        out += v[i].first + "=" + format_number(v[i].second);
      }
      return csv_string(out);
    }
  };
  return std::visit(V{}, f);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string to_json(const Record& r) {
  std::string out = "{";
  for (std::size_t i = 0; i < r.fields.size(); ++i) {
    if (i) out += ",";
    out += json_string(r.fields[i].first) + ":" + json_field(r.fields[i].second);
  }
  return out + "}";
}

std::string csv_header(const Record& r) {
  std::string out;
  for (std::size_t i = 0; i < r.fields.size(); ++i) {
    if (i) out += ",";
    out += csv_string(r.fields[i].first);
  }
  return out;
}

std::string to_csv(const Record& r) {
  std::string out;
  for (std::size_t i = 0; i < r.fields.size(); ++i) {
    if (i) out += ",";
    out += csv_field(r.fields[i].second);
  }
  return out;
}

Record to_record(const FormulaReport& r) {
  Record rec;
  rec.add("formula_id", std::string(to_string(r.formula_id)))
      .add("inputs", r.inputs)
      .add("lhs", r.lhs)
      .add("rhs", r.rhs)
      .add("ratio", r.ratio)
      .add("envelope", r.envelope)
      .add("K", r.K)
      .add("verdict", std::string(to_string(r.verdict)));
  return rec;
}

void RecordWriter::write(const Record& r) {
  if (format_ == OutputFormat::json) {
    os_ << to_json(r) << '\n';
    return;
  }
  const std::string header = csv_header(r);
  if (header != last_header_) {
    os_ << header << '\n';
    last_header_ = header;
  }
  os_ << to_csv(r) << '\n';
}

}  // namespace hlz
