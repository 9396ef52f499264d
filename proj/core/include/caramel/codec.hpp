#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "caramel/errors.hpp"

namespace caramel {

// Value multiset of one column: unique values with counts, sorted by
// (count descending, value bytes ascending).
struct FrequencyTable {
  struct Entry {
    std::string value;
    uint64_t count = 0;
  };
  std::vector<Entry> entries;
  uint64_t total = 0;
};

FrequencyTable make_frequency_table(const std::vector<std::string>& values);
FrequencyTable make_frequency_table(std::vector<FrequencyTable::Entry> entries);

// Empirical entropy in bits per element: sum (#(v)/N) * log2(N/#(v)).
double entropy(const FrequencyTable& ft);

// One codeword, bit j (transmitted first = MSB) is (bits >> (length-1-j)) & 1.
struct Codeword {
  uint64_t bits = 0;
  uint8_t length = 0;

  bool bit(uint32_t j) const { return (bits >> (length - 1 - j)) & 1; }
};

// Canonical Huffman code: symbols listed in canonical order (length
// ascending, value bytes ascending); codewords are implied by lengths.
class CanonicalCode {
 public:
  struct Symbol {
    std::string value;
    uint8_t length = 0;
  };

  // Symbols must already be in canonical order; validates lengths and
  // Kraft sum <= 1. Used by build_code and by deserialization.
  static CanonicalCode from_symbols(std::vector<Symbol> symbols);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  uint8_t max_length() const { return max_length_; }
  uint32_t size() const { return static_cast<uint32_t>(symbols_.size()); }

  const std::string& value(uint32_t idx) const { return symbols_[idx].value; }
  Codeword codeword(uint32_t idx) const;

  // Throws DataError for values outside the codebook.
  Codeword encode(std::string_view v) const;

  // Reads bits (MSB of a codeword first) from next_bit until a codeword is
  // recognized. Returns (symbol index, bits consumed). Throws FormatError if
  // max_length bits are consumed without a match.
  template <typename NextBit>
  std::pair<uint32_t, uint32_t> decode_prefix(NextBit&& next_bit) const {
    uint64_t acc = 0;
    for (uint32_t len = 1; len <= max_length_; len++) {
      acc = (acc << 1) | (next_bit() ? 1 : 0);
      if (count_[len] && acc < first_code_[len] + count_[len] && acc >= first_code_[len])
        return {offset_[len] + static_cast<uint32_t>(acc - first_code_[len]), len};
    }
    throw FormatError("corrupt stream: no codeword within max length");
  }

 private:
  std::vector<Symbol> symbols_;
  uint8_t max_length_ = 0;
  // Indexed by length 1..max_length_.
  std::vector<uint64_t> first_code_;
  std::vector<uint32_t> count_;
  std::vector<uint32_t> offset_;
  std::unordered_map<std::string, uint32_t> index_;
};

// Huffman-optimal canonical code over ft (>= 2 distinct values required).
// Codes longer than max_length are length-limited by package-merge.
CanonicalCode build_code(const FrequencyTable& ft, int max_length = 58);

}  // namespace caramel
