#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "caramel/bloom.hpp"
#include "caramel/csf.hpp"
#include "caramel/errors.hpp"

namespace caramel {

using Matrix = std::vector<std::vector<std::string>>;

struct MatrixInput {
  std::vector<std::string> keys;
  Matrix rows;              // rows[i] has exactly m entries
  bool permutable = false;  // rows contain no within-row duplicate values
};

struct BuildConfig {
  double delta = 1.089;
  bool permute = false;
  uint32_t block_size = 8;  // permutation early-termination threshold
  uint64_t master_seed = 1;
  bool use_bloom = true;
  bool checksums = true;
  uint32_t target_chunk_keys = 10000;
  uint32_t threads = 0;  // 0 = hardware; CARAMEL_THREADS caps either way
};

struct ColumnStore {
  enum class Kind : uint8_t { kConstant = 0, kPlain = 1, kFiltered = 2 };

  Kind kind = Kind::kConstant;
  std::string v0;          // constant/filtered dominant value
  double alpha = 1.0;      // dominant-value frequency at build
  double entropy = 0.0;    // column empirical entropy at build
  std::optional<BloomFilter> filter;
  std::optional<CsfColumn> csf;
};

struct CaramelTable {
  uint16_t version = 1;
  uint8_t hash_id = 1;
  uint64_t master_seed = 0;
  uint64_t n_keys = 0;
  uint16_t m = 0;
  double delta = 1.089;
  bool permuted = false;
  uint16_t block_size = 8;
  bool bloom_enabled = true;
  bool checksums = true;
  std::vector<ColumnStore> columns;
};

struct ColumnBuildStats {
  ColumnStore::Kind kind = ColumnStore::Kind::kConstant;
  double alpha = 1.0;
  double entropy = 0.0;
  CsfBuildStats csf;
  uint64_t bloom_bits = 0;
};

struct TableBuildReport {
  std::vector<ColumnBuildStats> columns;
  double permute_seconds = 0.0;

  CsfBuildStats totals() const {
    CsfBuildStats t;
    for (const auto& c : columns) t.merge(c.csf);
    return t;
  }
};

// Algorithm: optional row permutation, then per column: dominant value and
// alpha, filter decision, constant/plain/filtered store.
CaramelTable build(const MatrixInput& input, const BuildConfig& config,
                   TableBuildReport* report = nullptr);

// Exact stored value for build keys; arbitrary for unknown keys.
const std::string& query(const CaramelTable& table, std::string_view key, uint32_t j);
std::vector<std::string> query_row(const CaramelTable& table, std::string_view key);

// Greedy row permutation: repeatedly swap the (value, column) pair covering
// the most still-eligible rows into a single column; early-terminates once
// the best weight drops to block_size or below. Every output row is a
// permutation of its input row.
Matrix permute_rows(const Matrix& rows, uint32_t block_size);

// Sum over columns of the empirical entropy (bits per element).
double column_entropy_sum(const Matrix& rows);

std::vector<uint8_t> serialize(const CaramelTable& table);
CaramelTable deserialize(const std::vector<uint8_t>& bytes);
void save_file(const CaramelTable& table, const std::string& path);
CaramelTable load_file(const std::string& path);

// Per-column accounting of a built table, for `caramel stats`.
struct ColumnSizes {
  ColumnStore::Kind kind;
  double alpha;
  double entropy;
  uint64_t code_bits;   // serialized codebook bits
  uint64_t bloom_bits;  // filter length b
  uint64_t g_bits;      // sum of solution vector lengths
  uint64_t payload_bytes;
};
std::vector<ColumnSizes> column_sizes(const CaramelTable& table);

}  // namespace caramel
