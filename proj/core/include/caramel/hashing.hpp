#pragma once

#include <cstdint>
#include <string_view>

namespace caramel {

// 128-bit key digest. Keys are hashed once at build time and never stored;
// everything downstream (chunk choice, equation spots, Bloom probes) is
// derived from the fingerprint.
struct Fingerprint {
  uint64_t hi = 0;
  uint64_t lo = 0;

  bool operator==(const Fingerprint&) const = default;
  auto operator<=>(const Fingerprint&) const = default;
};

// Three equation positions, one in each third of a chunk's variable range:
// h1 in [0, L/3), h2 in [L/3, 2L/3), h3 in [2L/3, L).
struct SpotTriple {
  uint64_t h1 = 0;
  uint64_t h2 = 0;
  uint64_t h3 = 0;
};

// splitmix64 finalizer; used for seed derivation and spot expansion.
inline uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// MurmurHash3 x64 128 (public domain), with both internal lanes initialized
// from the full 64-bit seed. Hash id 1 in the file header.
Fingerprint fingerprint(std::string_view key, uint64_t seed);

// Per-key equation triple for a chunk with L variables (L divisible by 3).
// Uniform over each third; deterministic in (fp, chunk_seed, L).
SpotTriple equation_spots(const Fingerprint& fp, uint64_t chunk_seed, uint64_t L);

// Double-hashed Bloom probe positions: pos_i = (hi + i*lo) mod b, i in [0, k).
void bloom_spots(const Fingerprint& fp, uint32_t k, uint64_t b, uint64_t* out);

// Chunk selector: top log2_chunks bits of fp.hi.
inline uint32_t chunk_index(const Fingerprint& fp, uint32_t log2_chunks) {
  return log2_chunks == 0 ? 0 : static_cast<uint32_t>(fp.hi >> (64 - log2_chunks));
}

}  // namespace caramel
