#include "caramel/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>

namespace caramel {

void add_key_equations(LinearSystem& sys, const SpotTriple& t, Codeword cw) {
  if (cw.length == 0) return;
  if (t.h3 + cw.length - 1 >= sys.nvars)
    throw BuildError("equation spot shifted past variable range");
  if (sys.nvars > std::numeric_limits<uint32_t>::max())
    throw BuildError("variable range exceeds 32-bit spot indices");
  for (uint32_t i = 0; i < cw.length; i++) {
    Equation eq;
    eq.spots = {static_cast<uint32_t>(t.h1 + i), static_cast<uint32_t>(t.h2 + i),
                static_cast<uint32_t>(t.h3 + i)};
    eq.rhs = cw.bit(i) ? 1 : 0;
    sys.equations.push_back(eq);
  }
}

uint32_t xor_lookup(const BitVector& g, const SpotTriple& t, const CanonicalCode& code) {
  uint64_t i = 0;
  auto next_bit = [&] {
    bool b = g.get(t.h1 + i) ^ g.get(t.h2 + i) ^ g.get(t.h3 + i);
    i++;
    return b;
  };
  return code.decode_prefix(next_bit).first;
}

namespace {

// Footprints are bitsets over active ids, stored as word vectors that grow on
// demand (ids only increase while an equation is alive).
void xor_words(std::vector<uint64_t>& dst, const std::vector<uint64_t>& src) {
  if (src.size() > dst.size()) dst.resize(src.size(), 0);
  for (size_t w = 0; w < src.size(); w++) dst[w] ^= src[w];
}

}  // namespace

std::optional<BitVector> solve(const LinearSystem& sys) {
  const uint64_t L = sys.nvars;
  const size_t E = sys.equations.size();
  if (L > std::numeric_limits<uint32_t>::max())
    throw BuildError("variable range exceeds 32-bit spot indices");
  BitVector g(L);
  if (E == 0) return g;

  // Variable degrees and equation adjacency (CSR).
  std::vector<uint32_t> deg(L, 0);
  for (const auto& eq : sys.equations)
    for (uint32_t s : eq.spots) deg[s]++;
  std::vector<uint32_t> adj_start(L + 1, 0);
  for (uint64_t v = 0; v < L; v++) adj_start[v + 1] = adj_start[v] + deg[v];
  std::vector<uint32_t> adj(3 * E);
  {
    std::vector<uint32_t> cursor(adj_start.begin(), adj_start.end() - 1);
    for (size_t e = 0; e < E; e++)
      for (uint32_t s : sys.equations[e].spots) adj[cursor[s]++] = static_cast<uint32_t>(e);
  }

  std::vector<uint8_t> mask(E, 7);  // which of the 3 spots are still normal
  std::vector<uint8_t> rhs(E);
  std::vector<uint8_t> alive(E, 1);
  for (size_t e = 0; e < E; e++) rhs[e] = sys.equations[e].rhs;
  std::vector<std::vector<uint64_t>> foot(E);  // active-id footprint bitsets
  std::vector<uint32_t> acts;                  // active-id -> variable
  std::vector<uint8_t> var_active(L, 0);

  std::vector<uint32_t> one_normal;                  // eqs with <= 1 normal vars
  std::vector<uint32_t> deg1;                        // vars that hit degree 1
  std::vector<std::pair<uint32_t, uint32_t>> order;  // (eq, pivot var), kill order
  std::vector<std::pair<std::vector<uint64_t>, uint8_t>> dense;

  for (uint64_t v = 0; v < L; v++)
    if (deg[v] == 1) deg1.push_back(static_cast<uint32_t>(v));

  uint32_t maxd = 0;
  for (uint64_t v = 0; v < L; v++) maxd = std::max(maxd, deg[v]);
  std::vector<std::vector<uint32_t>> buckets(maxd + 1);
  for (uint64_t v = 0; v < L; v++)
    if (deg[v] >= 2) buckets[deg[v]].push_back(static_cast<uint32_t>(v));

  size_t nalive = E;
  auto kill = [&](uint32_t e) {
    alive[e] = 0;
    nalive--;
    const auto& spots = sys.equations[e].spots;
    for (int c = 0; c < 3; c++) {
      if (!(mask[e] >> c & 1)) continue;
      uint32_t u = spots[c];
      if (--deg[u] == 1) deg1.push_back(u);
    }
  };

  while (nalive) {
    if (!one_normal.empty()) {
      uint32_t e = one_normal.back();
      one_normal.pop_back();
      if (!alive[e]) continue;
      int nn = std::popcount(mask[e]);
      if (nn > 1) continue;  // stale entry
      if (nn == 0) {
        alive[e] = 0;
        nalive--;
        dense.emplace_back(std::move(foot[e]), rhs[e]);
        continue;
      }
      const int c = std::countr_zero(mask[e]);
      const uint32_t u = sys.equations[e].spots[c];
      order.emplace_back(e, u);
      if (deg[u] == 1) {
        kill(e);
        continue;
      }
      // Eliminate u from every other equation containing it; fill-in lands
      // in the footprint, never in the sparse part.
      alive[e] = 0;
      nalive--;
      for (uint32_t k = adj_start[u]; k < adj_start[u + 1]; k++) {
        uint32_t e2 = adj[k];
        if (!alive[e2]) continue;
        const auto& sp2 = sys.equations[e2].spots;
        for (int c2 = 0; c2 < 3; c2++) {
          if ((mask[e2] >> c2 & 1) && sp2[c2] == u) {
            mask[e2] = static_cast<uint8_t>(mask[e2] & ~(1 << c2));
            xor_words(foot[e2], foot[e]);
            rhs[e2] ^= rhs[e];
            if (std::popcount(mask[e2]) <= 1) one_normal.push_back(e2);
            break;
          }
        }
      }
      deg[u] = 0;
      continue;
    }
    if (!deg1.empty()) {
      uint32_t v = deg1.back();
      deg1.pop_back();
      if (var_active[v] || deg[v] != 1) continue;
      for (uint32_t k = adj_start[v]; k < adj_start[v + 1]; k++) {
        uint32_t e = adj[k];
        if (!alive[e]) continue;
        const auto& sp = sys.equations[e].spots;
        bool has = false;
        for (int c = 0; c < 3; c++)
          if ((mask[e] >> c & 1) && sp[c] == v) has = true;
        if (!has) continue;
        order.emplace_back(e, v);
        kill(e);
        break;
      }
      continue;
    }
    // Activate the max-degree normal variable.
    uint32_t v = std::numeric_limits<uint32_t>::max();
    while (maxd >= 2) {
      auto& b = buckets[maxd];
      while (!b.empty()) {
        uint32_t u = b.back();
        b.pop_back();
        if (var_active[u]) continue;
        if (deg[u] == maxd) {
          v = u;
          break;
        }
        if (deg[u] >= 2) buckets[deg[u]].push_back(u);
      }
      if (v != std::numeric_limits<uint32_t>::max()) break;
      maxd--;
    }
    if (v == std::numeric_limits<uint32_t>::max()) break;  // defensive; unreachable
    var_active[v] = 1;
    const uint32_t aid = static_cast<uint32_t>(acts.size());
    acts.push_back(v);
    for (uint32_t k = adj_start[v]; k < adj_start[v + 1]; k++) {
      uint32_t e = adj[k];
      if (!alive[e]) continue;
      const auto& sp = sys.equations[e].spots;
      for (int c = 0; c < 3; c++) {
        if ((mask[e] >> c & 1) && sp[c] == v) {
          mask[e] = static_cast<uint8_t>(mask[e] & ~(1 << c));
          auto& f = foot[e];
          if ((aid >> 6) >= f.size()) f.resize((aid >> 6) + 1, 0);
          f[aid >> 6] |= uint64_t{1} << (aid & 63);
          if (std::popcount(mask[e]) <= 1) one_normal.push_back(e);
          break;
        }
      }
    }
    deg[v] = 0;
  }

  // Dense elimination over the activated variables (rhs in the last bit),
  // then reverse substitution into x, the active-value bitset.
  const size_t A = acts.size();
  const size_t W = A / 64 + 1;
  const size_t R = dense.size();
  std::vector<uint64_t> x(W, 0);  // bit aid = value of acts[aid]; bit A stays 0
  if (R > 0) {
    const uint64_t rhs_bit = uint64_t{1} << (A & 63);
    std::vector<uint64_t> m(R * W, 0);
    for (size_t r = 0; r < R; r++) {
      const auto& f = dense[r].first;
      std::copy(f.begin(), f.end(), m.begin() + r * W);
      if (dense[r].second) m[r * W + (A >> 6)] |= rhs_bit;
    }
    std::vector<size_t> pivot_col(R);
    size_t rp = 0;
    for (size_t j = 0; j < A && rp < R; j++) {
      const size_t jw = j >> 6;
      const uint64_t jb = uint64_t{1} << (j & 63);
      size_t p = rp;
      while (p < R && !(m[p * W + jw] & jb)) p++;
      if (p == R) continue;
      if (p != rp)
        std::swap_ranges(m.begin() + p * W, m.begin() + (p + 1) * W, m.begin() + rp * W);
      for (size_t r = rp + 1; r < R; r++) {
        if (!(m[r * W + jw] & jb)) continue;
        uint64_t* dst = &m[r * W];
        const uint64_t* src = &m[rp * W];
        for (size_t w = 0; w < W; w++) dst[w] ^= src[w];
      }
      pivot_col[rp] = j;
      rp++;
    }
    for (size_t r = rp; r < R; r++)
      if (m[r * W + (A >> 6)] & rhs_bit) return std::nullopt;
    for (size_t r = rp; r-- > 0;) {
      // Pivot value = rhs ^ parity over already-solved columns to the right
      // (free variables are 0, and x's own pivot bit is still 0 here).
      const uint64_t* row = &m[r * W];
      int par = 0;
      for (size_t w = 0; w < W; w++) par += std::popcount(row[w] & x[w]);
      if ((par & 1) != ((m[r * W + (A >> 6)] & rhs_bit) != 0))
        x[pivot_col[r] >> 6] |= uint64_t{1} << (pivot_col[r] & 63);
    }
    for (size_t j = 0; j < A; j++)
      if (x[j >> 6] >> (j & 63) & 1) g.set(acts[j], true);
  }

  // Back-substitute pivots in reverse kill order.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto [e, v] = *it;
    const auto& sp = sys.equations[e].spots;
    bool bit = rhs[e];
    for (int c = 0; c < 3; c++)
      if ((mask[e] >> c & 1) && sp[c] != v) bit ^= g.get(sp[c]);
    const auto& f = foot[e];
    int par = 0;
    for (size_t w = 0; w < f.size(); w++) par += std::popcount(f[w] & x[w]);
    bit ^= par & 1;
    g.set(v, bit);
  }

  // Mandatory post-solve verification.
  for (const auto& eq : sys.equations) {
    bool x = g.get(eq.spots[0]) ^ g.get(eq.spots[1]) ^ g.get(eq.spots[2]);
    if (x != static_cast<bool>(eq.rhs)) return std::nullopt;
  }
  return g;
}

}  // namespace caramel
