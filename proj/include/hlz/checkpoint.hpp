#pragma once

// Persistent table of I(t) at t = 100, 200, ...
//
// File format: one header line
//   # hlz-checkpoint v1, mu=<coeff>,<omega1>,<omega2>, terms=<k>
// followed by rows `t,I,err_accum` with 17 significant digits and strictly
// increasing t. The file is only ever appended to.

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

namespace hlz {

struct Checkpoint {
  double t = 0.0;
  double I = 0.0;
  double err_accum = 0.0;
};

class CheckpointStore {
 public:
  /// Opens (or creates) the file at path. An empty path keeps the table in
  /// memory. Throws CheckpointError if an existing file has a different
  /// header or malformed rows.
  CheckpointStore(std::string path, std::string header);

  /// Number of rows; row k holds t = 100 (k + 1).
  std::int64_t size() const;
  /// I and error at the start of block k (k = 0 gives t = 0, I = 0).
  Checkpoint at_block(std::int64_t k) const;
  std::vector<Checkpoint> rows() const;

  /// Appends rows; each must continue the table by exactly one block.
  void append(const std::vector<Checkpoint>& rows);

  const std::string& path() const { return path_; }
  const std::string& header() const { return header_; }

 private:
  std::string path_;
  std::string header_;
  mutable std::shared_mutex mutex_;
  std::vector<Checkpoint> rows_;
};

std::string checkpoint_header(double coeff, double omega1, double omega2, int terms);

}  // namespace hlz
