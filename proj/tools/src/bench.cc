#include "bench.hpp"

#include <algorithm>
#include <caramel/caramel.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "ingest.hpp"

namespace caramel::cli {

namespace {

struct BenchReport {
  std::string dataset;
  uint64_t n = 0;
  uint64_t m = 0;
  double h0_sum = 0;  // bits per row, summed over columns
  uint64_t flat_bytes = 0;
  uint64_t compressed_bytes = 0;
  double build_s = 0;
  double q_med_us = -1;
  double q_p99_us = -1;
};

void header(std::ostream& out) {
  out << "dataset\tn\tm\th0_sum_bits\tflat_bytes\tcompressed_bytes\tc_rate\t"
         "build_s\tq_med_us\tq_p99_us\n";
}

void emit(std::ostream& out, const BenchReport& r) {
  double rate = r.compressed_bytes ? double(r.flat_bytes) / double(r.compressed_bytes) : 0;
  char buf[352];
  std::snprintf(buf, sizeof buf,
                "%s\t%llu\t%llu\t%.4f\t%llu\t%llu\t%.4f\t%.3f\t", r.dataset.c_str(),
                (unsigned long long)r.n, (unsigned long long)r.m, r.h0_sum,
                (unsigned long long)r.flat_bytes, (unsigned long long)r.compressed_bytes,
                rate, r.build_s);
  out << buf;
  if (r.q_med_us < 0)
    out << "-\t-\n";
  else {
    std::snprintf(buf, sizeof buf, "%.3f\t%.3f\n", r.q_med_us, r.q_p99_us);
    out << buf;
  }
}

template <typename Lookup>
void measure_latency(const std::vector<std::string>& keys, uint64_t m, uint64_t seed,
                     Lookup&& lookup, BenchReport& r) {
  constexpr int kQueries = 20000;
  std::mt19937_64 rng(seed ^ 0x1a7e9c7ULL);
  std::vector<double> us(kQueries);
  for (int q = 0; q < kQueries; q++) {
    const std::string& key = keys[bounded(rng, keys.size())];
    uint32_t j = static_cast<uint32_t>(bounded(rng, m));
    auto t0 = std::chrono::steady_clock::now();
    lookup(key, j);
    auto t1 = std::chrono::steady_clock::now();
    us[q] = std::chrono::duration<double, std::micro>(t1 - t0).count();
  }
  std::sort(us.begin(), us.end());
  r.q_med_us = us[kQueries / 2];
  r.q_p99_us = us[kQueries - kQueries / 100];
}

BenchReport build_report(const std::string& name, const MatrixInput& in,
                         const BuildConfig& cfg, CaramelTable* keep = nullptr) {
  BenchReport r;
  r.dataset = name;
  r.n = in.keys.size();
  r.m = in.rows[0].size();
  r.h0_sum = column_entropy_sum(in.rows);
  r.flat_bytes = r.n * r.m * 4;
  auto t0 = std::chrono::steady_clock::now();
  CaramelTable table = build(in, cfg);
  r.build_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.compressed_bytes = serialize(table).size();
  measure_latency(in.keys, r.m, cfg.master_seed,
                  [&](const std::string& k, uint32_t j) { return query(table, k, j); }, r);
  if (keep) *keep = std::move(table);
  return r;
}

void suite_gen(const std::string& gen, const std::string& name, uint64_t seed,
               std::ostream& out) {
  MatrixInput in = generate(gen, seed);
  BuildConfig cfg;
  cfg.master_seed = seed;
  emit(out, build_report(name, in, cfg));
}

void suite_bloom_sweep(uint64_t seed, std::ostream& out) {
  constexpr uint64_t kN = 100000;
  for (int pct = 50; pct <= 95; pct += 5) {
    MatrixInput in;
    in.keys.reserve(kN);
    in.rows.reserve(kN);
    uint64_t n0 = kN * pct / 100;
    std::mt19937_64 rng(seed ^ (uint64_t)pct);
    for (uint64_t i = 0; i < kN; i++) {
      in.keys.push_back("key-" + std::to_string(i));
      in.rows.push_back({i < n0 ? "0" : "1"});
    }
    for (uint64_t i = kN - 1; i > 0; i--) std::swap(in.rows[i], in.rows[bounded(rng, i + 1)]);

    char name[48];
    BuildConfig cfg;
    cfg.master_seed = seed;
    std::snprintf(name, sizeof name, "bloom-a0.%02d", pct);
    emit(out, build_report(name, in, cfg));
    cfg.use_bloom = false;
    std::snprintf(name, sizeof name, "bloom-a0.%02d-nofilter", pct);
    emit(out, build_report(name, in, cfg));
  }
}

void suite_permute(uint64_t seed, std::ostream& out) {
  constexpr int kRows = 1000, kTemplates = 4, kM = 8;
  std::mt19937_64 rng(seed ^ 0x9e21ULL);
  MatrixInput in;
  in.permutable = true;
  for (int i = 0; i < kRows; i++) {
    int t = i % kTemplates;
    std::vector<std::string> row;
    for (int j = 0; j < kM; j++) row.push_back("t" + std::to_string(t * kM + j));
    for (int j = kM - 1; j > 0; j--)
      std::swap(row[j], row[bounded(rng, uint64_t(j) + 1)]);
    in.keys.push_back("key-" + std::to_string(i));
    in.rows.push_back(std::move(row));
  }

  BuildConfig cfg;
  cfg.master_seed = seed;
  BenchReport off = build_report("permute-off", in, cfg);
  cfg.permute = true;
  BenchReport on = build_report("permute-on", in, cfg);
  on.h0_sum = column_entropy_sum(permute_rows(in.rows, cfg.block_size));
  emit(out, off);
  emit(out, on);
}

void suite_latency(uint64_t seed, std::ostream& out) {
  MatrixInput in = generate("uniform:1000000x1:1000", seed);
  BuildConfig cfg;
  cfg.master_seed = seed;
  CaramelTable table;
  emit(out, build_report("csf-1M", in, cfg, &table));

  std::unordered_map<std::string, std::string> map;
  map.reserve(in.keys.size());
  auto t0 = std::chrono::steady_clock::now();
  for (size_t i = 0; i < in.keys.size(); i++) map[in.keys[i]] = in.rows[i][0];
  BenchReport r;
  r.dataset = "unordered-map-1M";
  r.n = in.keys.size();
  r.m = 1;
  r.h0_sum = column_entropy_sum(in.rows);
  r.build_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.flat_bytes = r.n * 4;
  uint64_t mem = map.bucket_count() * sizeof(void*);
  for (const auto& [k, v] : map) mem += 48 + k.capacity() + v.capacity();
  r.compressed_bytes = mem;  // estimated resident size
  measure_latency(in.keys, 1, cfg.master_seed,
                  [&](const std::string& k, uint32_t) { return map.find(k)->second; }, r);
  emit(out, r);
}

}  // namespace

void run_bench(const std::string& suite, uint64_t seed, std::ostream& out) {
  header(out);
  if (suite == "uniform")
    suite_gen("uniform:10000x100:1000", "uniform-10Kx100", seed, out);
  else if (suite == "powerlaw")
    suite_gen("powerlaw:10000x100:1000:2", "powerlaw-10Kx100", seed, out);
  else if (suite == "bloom-sweep")
    suite_bloom_sweep(seed, out);
  else if (suite == "permute")
    suite_permute(seed, out);
  else if (suite == "latency")
    suite_latency(seed, out);
  else
    throw DataError("unknown bench suite: " + suite);
}

}  // namespace caramel::cli
