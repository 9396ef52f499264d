#pragma once

#include <cstdint>
#include <vector>

namespace caramel {

// Packed bit array. Layout is part of the file format: little-endian 64-bit
// words, bit i lives at bit (i & 63) of word (i >> 6).
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(uint64_t n) : len_(n), words_((n + 63) / 64, 0) {}

  uint64_t size() const { return len_; }
  bool empty() const { return len_ == 0; }

  bool get(uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(uint64_t i, bool v) {
    uint64_t mask = uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void flip(uint64_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

  const std::vector<uint64_t>& words() const { return words_; }
  std::vector<uint64_t>& words() { return words_; }

  bool operator==(const BitVector& o) const = default;

 private:
  uint64_t len_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace caramel
