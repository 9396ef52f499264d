#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "caramel/bits.hpp"
#include "caramel/codec.hpp"
#include "caramel/errors.hpp"
#include "caramel/hashing.hpp"

namespace caramel {

// One XOR constraint over three distinct variables.
struct Equation {
  std::array<uint32_t, 3> spots{};  // strictly increasing
  uint8_t rhs = 0;
};

struct LinearSystem {
  uint64_t nvars = 0;
  std::vector<Equation> equations;
};

// Appends one equation per codeword bit: equation i has spots
// (h1+i, h2+i, h3+i) and rhs = codeword bit i (MSB first).
// Throws BuildError if a shifted spot would reach past nvars.
void add_key_equations(LinearSystem& sys, const SpotTriple& t, Codeword cw);

// Solves the system over GF(2): hypergraph peeling, then elimination of
// equations left with a single variable (fill-in confined to a footprint
// over a small activated variable set), then dense Gaussian elimination
// over the activated variables, then back-substitution. Free variables are
// 0. Every returned vector is verified against all equations before being
// handed back; inconsistent systems yield nullopt.
std::optional<BitVector> solve(const LinearSystem& sys);

// Streams g[h1+i] ^ g[h2+i] ^ g[h3+i] into the prefix decoder and returns
// the symbol index of the decoded value.
uint32_t xor_lookup(const BitVector& g, const SpotTriple& t, const CanonicalCode& code);

}  // namespace caramel
