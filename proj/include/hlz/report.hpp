#pragma once

// Flat output records written as JSON lines or CSV. Numbers carry 17
// significant digits so every double round-trips; both formats print the
// same digits.

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hlz/harness.hpp"

namespace hlz {

using NamedValues = std::vector<std::pair<std::string, double>>;
using Field = std::variant<double, std::int64_t, bool, std::string, NamedValues>;

struct Record {
  std::vector<std::pair<std::string, Field>> fields;
  Record& add(std::string key, Field value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

enum class OutputFormat { json, csv };

/// "%.17g"; non-finite values print as nan / inf / -inf.
std::string format_number(double v);

std::string to_json(const Record& r);
std::string csv_header(const Record& r);
std::string to_csv(const Record& r);

/// formula_id, inputs, lhs, rhs, ratio, envelope, K, verdict.
Record to_record(const FormulaReport& r);

/// Writes records in one format; CSV gets a header line whenever the set of
/// keys changes.
class RecordWriter {
 public:
  RecordWriter(std::ostream& os, OutputFormat format) : os_(os), format_(format) {}
  void write(const Record& r);

 private:
  std::ostream& os_;
  OutputFormat format_;
  std::string last_header_;
};

}  // namespace hlz
