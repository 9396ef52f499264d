#pragma once

#include <caramel/caramel.hpp>
#include <cstdint>
#include <random>
#include <string>

namespace caramel::cli {

struct IngestSpec {
  std::string path;
  std::string format = "tsv";  // tsv | tokens
  uint32_t key_col = 0;        // tsv: which column holds the key
  uint32_t token_cols = 0;     // tokens: row width; 0 = infer from first line
  std::string pad = "0";       // tokens: fill for short rows
  bool permutable = false;
};

MatrixInput read_matrix(const IngestSpec& spec);

// "uniform:NxM:V" or "powerlaw:NxM:V[:k]"; values are decimal ints in [0, V).
MatrixInput generate(const std::string& spec, uint64_t seed);

// Unbiased-enough bounded draw that is identical on every platform, unlike
// std::uniform_int_distribution.
inline uint64_t bounded(std::mt19937_64& rng, uint64_t n) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace caramel::cli
