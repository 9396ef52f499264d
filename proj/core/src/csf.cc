#include "caramel/csf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "caramel/errors.hpp"
#include "caramel/gf2.hpp"

namespace caramel {

namespace {

std::string hex128(const Fingerprint& fp) {
  char buf[36];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(fp.hi),
                static_cast<unsigned long long>(fp.lo));
  return buf;
}

uint64_t pad3(uint64_t x) { return x + (3 - x % 3) % 3; }

}  // namespace

CsfColumn build_csf(const std::vector<std::pair<Fingerprint, std::string>>& pairs,
                    uint64_t master_seed, const CsfOptions& opts, CsfBuildStats* stats) {
  if (pairs.empty()) throw DataError("build_csf requires at least one pair");

  {
    std::vector<Fingerprint> fps;
    fps.reserve(pairs.size());
    for (const auto& [fp, v] : pairs) fps.push_back(fp);
    std::sort(fps.begin(), fps.end());
    auto dup = std::adjacent_find(fps.begin(), fps.end());
    if (dup != fps.end())
      throw DataError("duplicate fingerprint " + hex128(*dup) + " in build set");
  }

  std::vector<std::string> values;
  values.reserve(pairs.size());
  for (const auto& [fp, v] : pairs) values.push_back(v);
  FrequencyTable ft = make_frequency_table(values);
  if (ft.entries.size() < 2) throw DataError("build_csf requires >= 2 distinct values");

  CsfColumn col;
  col.code = build_code(ft, opts.max_code_length);
  col.master_seed = master_seed;

  uint32_t cc = 1;
  const uint64_t n = pairs.size();
  while ((n + cc - 1) / cc > opts.target_chunk_keys) cc <<= 1;
  col.chunk_count = cc;
  const uint32_t log2cc = static_cast<uint32_t>(std::countr_zero(cc));

  struct KeyCw {
    Fingerprint fp;
    Codeword cw;
  };
  std::vector<std::vector<KeyCw>> by_chunk(cc);
  for (const auto& [fp, v] : pairs)
    by_chunk[chunk_index(fp, log2cc)].push_back({fp, col.code.encode(v)});

  const uint8_t maxlen = col.code.max_length();
  col.chunks.resize(cc);
  for (uint32_t ci = 0; ci < cc; ci++) {
    auto& keys = by_chunk[ci];
    auto& out = col.chunks[ci];
    uint64_t ebits = 0;
    for (const auto& k : keys) ebits += k.cw.length;
    if (stats) {
      stats->chunks++;
      stats->code_bits += ebits;
    }
    if (ebits == 0) continue;  // empty chunk: zero-length g

    bool solved = false;
    int attempt = 0;
    for (int esc = 0; esc <= opts.gamma_escalations && !solved; esc++) {
      const double gamma = opts.gamma * std::pow(1.05, esc);
      // Floor of 6 keeps every third at least two slots wide; otherwise a
      // couple of 1-bit codewords pin every key to the same spot triple and
      // no retry can succeed.
      const uint64_t L0 =
          pad3(std::max<uint64_t>(6, static_cast<uint64_t>(std::ceil(gamma * double(ebits)))));
      const uint64_t Lvec = L0 + maxlen - 1;
      for (int retry = 0; retry < opts.seed_retries && !solved; retry++, attempt++) {
        const uint64_t chunk_seed =
            master_seed ^ mix64((uint64_t{ci} << 20) ^ static_cast<uint64_t>(attempt));
        LinearSystem sys;
        sys.nvars = Lvec;
        sys.equations.reserve(ebits);
        for (const auto& k : keys)
          add_key_equations(sys, equation_spots(k.fp, chunk_seed, L0), k.cw);
        if (auto g = solve(sys)) {
          out.seed = chunk_seed;
          out.g = std::move(*g);
          solved = true;
          if (stats) {
            if (attempt == 0) stats->first_seed_ok++;
            stats->retried_attempts += static_cast<uint64_t>(attempt);
            stats->g_bits += Lvec;
          }
        }
      }
    }
    if (!solved) throw BuildError("chunk construction failed after all seed retries");
  }
  return col;
}

const std::string& query_csf(const CsfColumn& col, const Fingerprint& fp) {
  const uint32_t log2cc = static_cast<uint32_t>(std::countr_zero(col.chunk_count));
  const auto& chunk = col.chunks[chunk_index(fp, log2cc)];
  if (chunk.g.empty()) return col.code.value(0);
  const uint64_t L0 = chunk.g.size() - (col.code.max_length() - 1);
  const SpotTriple t = equation_spots(fp, chunk.seed, L0);
  return col.code.value(xor_lookup(chunk.g, t, col.code));
}

}  // namespace caramel
