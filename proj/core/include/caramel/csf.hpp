#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "caramel/bits.hpp"
#include "caramel/codec.hpp"
#include "caramel/hashing.hpp"

namespace caramel {

struct CsfOptions {
  uint32_t target_chunk_keys = 10000;
  double gamma = 1.10;
  int seed_retries = 10;       // seeds tried per gamma level
  int gamma_escalations = 3;   // extra levels, gamma * 1.05 each
  int max_code_length = 58;
};

struct CsfBuildStats {
  uint64_t chunks = 0;
  uint64_t first_seed_ok = 0;  // chunks solved on the very first attempt
  uint64_t retried_attempts = 0;
  uint64_t code_bits = 0;      // sum of codeword lengths over all build pairs
  uint64_t g_bits = 0;         // sum of solution vector lengths

  void merge(const CsfBuildStats& o) {
    chunks += o.chunks;
    first_seed_ok += o.first_seed_ok;
    retried_attempts += o.retried_attempts;
    code_bits += o.code_bits;
    g_bits += o.g_bits;
  }
};

// One compressed static function over a single column.
struct CsfColumn {
  struct Chunk {
    uint64_t seed = 0;
    BitVector g;
  };

  CanonicalCode code;
  uint64_t master_seed = 0;    // column build seed (chunk seeds derive from it)
  uint32_t chunk_count = 1;    // power of two
  std::vector<Chunk> chunks;

  uint64_t g_bits() const {
    uint64_t s = 0;
    for (const auto& c : chunks) s += c.g.size();
    return s;
  }
};

// Builds the CSF. Requires >= 1 pair, distinct fingerprints, >= 2 distinct
// values. Throws DataError on bad input, BuildError when a chunk exhausts
// every seed retry and gamma escalation.
CsfColumn build_csf(const std::vector<std::pair<Fingerprint, std::string>>& pairs,
                    uint64_t master_seed, const CsfOptions& opts = {},
                    CsfBuildStats* stats = nullptr);

// Exact stored value for build keys; an arbitrary codebook value otherwise.
const std::string& query_csf(const CsfColumn& col, const Fingerprint& fp);

}  // namespace caramel
