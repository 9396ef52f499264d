#include "caramel/bloom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "caramel/errors.hpp"

namespace caramel {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr uint32_t kMaxProbes = 64;
}  // namespace

PrefilterDecision decide(double alpha, double delta) {
  PrefilterDecision d;
  d.alpha = alpha;
  d.delta = delta;
  if (alpha >= 1.0) {
    // Fully dominated column; handled upstream as a constant store.
    d.eps_star = 0.0;
    d.tau = std::numeric_limits<double>::infinity();
    return d;
  }
  const double raw = (1.44 / (delta * kLn2)) * (1.0 - alpha) / alpha;
  d.tau = 1.44 * ((1.0 - alpha) / (delta * alpha)) * std::log2(1.0 / raw);
  d.use_filter = raw > 0.0 && raw < 1.0 && d.tau <= 1.0;
  d.eps_star = std::clamp(raw, std::numeric_limits<double>::min(),
                          1.0 - std::numeric_limits<double>::epsilon());
  return d;
}

BloomFilter build_bloom(const std::vector<Fingerprint>& members, double eps) {
  if (members.empty()) throw DataError("bloom filter needs at least one member");
  if (!(eps > 0.0 && eps < 1.0)) throw DataError("bloom eps must be in (0, 1)");
  BloomFilter bf;
  bf.n = members.size();
  bf.eps = eps;
  bf.b = static_cast<uint64_t>(std::ceil(1.44 * double(bf.n) * std::log2(1.0 / eps)));
  if (bf.b == 0) bf.b = 1;
  bf.k = std::max<uint32_t>(
      1, static_cast<uint32_t>(std::llround(double(bf.b) * kLn2 / double(bf.n))));
  bf.k = std::min(bf.k, kMaxProbes);
  bf.bits = BitVector(bf.b);
  uint64_t spots[kMaxProbes];
  for (const auto& fp : members) {
    bloom_spots(fp, bf.k, bf.b, spots);
    for (uint32_t i = 0; i < bf.k; i++) bf.bits.set(spots[i], true);
  }
  return bf;
}

bool query_bloom(const BloomFilter& bf, const Fingerprint& fp) {
  uint64_t spots[kMaxProbes];
  bloom_spots(fp, bf.k, bf.b, spots);
  for (uint32_t i = 0; i < bf.k; i++)
    if (!bf.bits.get(spots[i])) return false;
  return true;
}

}  // namespace caramel
