#include "hlz/checkpoint.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hlz/errors.hpp"
#include "hlz/panel_grid.hpp"

namespace hlz {

namespace {

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_row(const std::string& line, Checkpoint& row) {
  const auto c1 = line.find(',');
  if (c1 == std::string::npos) return false;
  const auto c2 = line.find(',', c1 + 1);
  if (c2 == std::string::npos) return false;
  std::string_view v(line);
  return parse_double(v.substr(0, c1), row.t) && parse_double(v.substr(c1 + 1, c2 - c1 - 1), row.I) &&
         parse_double(v.substr(c2 + 1), row.err_accum);
}

double expected_t(std::int64_t k) { return kBlockLength * static_cast<double>(k + 1); }

}  // namespace

std::string checkpoint_header(double coeff, double omega1, double omega2, int terms) {
  return fmt::format("# hlz-checkpoint v1, mu={:.17g},{:.17g},{:.17g}, terms={}", coeff, omega1, omega2, terms);
}

CheckpointStore::CheckpointStore(std::string path, std::string header)
    : path_(std::move(path)), header_(std::move(header)) {
  if (path_.empty()) return;
  std::ifstream in(path_);
  if (!in) {
    std::ofstream out(path_);
    if (!out) throw CheckpointError("cannot create checkpoint file " + path_);
    out << header_ << '\n';
    return;
  }
  std::string line;
  if (!std::getline(in, line)) {
    // An empty file (for instance created by the caller) gets a header.
    std::ofstream out(path_, std::ios::app);
    out << header_ << '\n';
    return;
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header_) {
    throw CheckpointError("checkpoint file " + path_ + " was written with a different configuration:\n  found:    " +
                          line + "\n  expected: " + header_);
  }
  std::int64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Checkpoint row;
    if (!parse_row(line, row)) {
      throw CheckpointError(fmt::format("checkpoint file {} line {}: malformed row", path_, lineno));
    }
    const auto k = static_cast<std::int64_t>(rows_.size());
    const double prev_i = rows_.empty() ? 0.0 : rows_.back().I;
    if (row.t != expected_t(k) || !(row.I > prev_i) || !(row.err_accum >= 0.0)) {
      throw CheckpointError(fmt::format("checkpoint file {} line {}: row does not continue the table", path_, lineno));
    }
    rows_.push_back(row);
  }
}

std::int64_t CheckpointStore::size() const {
  std::shared_lock lock(mutex_);
  return static_cast<std::int64_t>(rows_.size());
}

Checkpoint CheckpointStore::at_block(std::int64_t k) const {
  if (k == 0) return {};
  std::shared_lock lock(mutex_);
  return rows_.at(static_cast<std::size_t>(k - 1));
}

std::vector<Checkpoint> CheckpointStore::rows() const {
  std::shared_lock lock(mutex_);
  return rows_;
}

void CheckpointStore::append(const std::vector<Checkpoint>& rows) {
  std::unique_lock lock(mutex_);
  std::string text;
  auto k = static_cast<std::int64_t>(rows_.size());
  double prev_i = rows_.empty() ? 0.0 : rows_.back().I;
  for (const auto& r : rows) {
    if (r.t != expected_t(k) || !(r.I > prev_i)) {
      throw CheckpointError(fmt::format("checkpoint append out of order at t = {:.17g}", r.t));
    }
    text += fmt::format("{:.17g},{:.17g},{:.17g}\n", r.t, r.I, r.err_accum);
    prev_i = r.I;
    ++k;
  }
  if (!path_.empty() && !text.empty()) {
    std::FILE* f = std::fopen(path_.c_str(), "a");
    if (!f) throw CheckpointError("cannot append to checkpoint file " + path_);
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    if (std::fclose(f) != 0 || !ok) throw CheckpointError("write to checkpoint file " + path_ + " failed");
  }
  rows_.insert(rows_.end(), rows.begin(), rows.end());
}

}  // namespace hlz
