#pragma once

#include <cstdint>
#include <vector>

#include "caramel/bits.hpp"
#include "caramel/hashing.hpp"

namespace caramel {

struct BloomFilter {
  BitVector bits;
  uint64_t b = 0;    // filter length in bits
  uint32_t k = 0;    // probes per key
  uint64_t n = 0;    // intended element count
  double eps = 0.0;  // design false-positive rate
};

// Whether prefiltering the dominant value of a column pays for itself.
struct PrefilterDecision {
  bool use_filter = false;
  double alpha = 0.0;     // dominant-value frequency
  double eps_star = 0.0;  // optimal design FPR, clamped to (0, 1)
  double tau = 0.0;       // decision statistic; filter helps iff tau <= 1
  double delta = 0.0;     // solver overhead constant
};

// eps_star = (1.44/(delta ln2)) (1-alpha)/alpha;
// tau = 1.44 ((1-alpha)/(delta alpha)) log2(1/eps_star);
// use_filter iff 0 < eps_star < 1 and tau <= 1.
PrefilterDecision decide(double alpha, double delta = 1.089);

// b = ceil(1.44 n log2(1/eps)), k = max(1, round(b ln2 / n)).
BloomFilter build_bloom(const std::vector<Fingerprint>& members, double eps);

bool query_bloom(const BloomFilter& bf, const Fingerprint& fp);

}  // namespace caramel
