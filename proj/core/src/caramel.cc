#include "caramel/caramel.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <thread>

namespace caramel {

namespace {

uint32_t thread_budget(uint32_t requested) {
  uint32_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CARAMEL_THREADS")) {
    char* end = nullptr;
    unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<uint32_t>(n, static_cast<uint32_t>(cap));
  }
  return std::max(1u, n);
}

uint64_t column_seed(uint64_t master_seed, uint32_t j) {
  return mix64(master_seed + 0x9e3779b97f4a7c15ULL * (uint64_t{j} + 1));
}

ColumnStore build_column(const std::vector<Fingerprint>& fps, const Matrix& matrix,
                         uint32_t j, const BuildConfig& cfg, ColumnBuildStats& stats) {
  const size_t n = matrix.size();
  std::vector<std::string> values(n);
  for (size_t i = 0; i < n; i++) values[i] = matrix[i][j];
  FrequencyTable ft = make_frequency_table(values);

  ColumnStore store;
  store.v0 = ft.entries[0].value;  // most frequent; ties by ascending bytes
  store.alpha = static_cast<double>(ft.entries[0].count) / static_cast<double>(ft.total);
  store.entropy = entropy(ft);
  stats.alpha = store.alpha;
  stats.entropy = store.entropy;

  if (ft.entries.size() == 1) {
    store.kind = ColumnStore::Kind::kConstant;
    stats.kind = store.kind;
    return store;
  }

  const CsfOptions csf_opts{.target_chunk_keys = cfg.target_chunk_keys};
  const PrefilterDecision dec = decide(store.alpha, cfg.delta);
  if (cfg.use_bloom && dec.use_filter) {
    std::vector<Fingerprint> members;
    members.reserve(n);
    for (size_t i = 0; i < n; i++)
      if (values[i] != store.v0) members.push_back(fps[i]);
    BloomFilter bf = build_bloom(members, dec.eps_star);

    // Keys with value v0 that false-positive through the filter reach the
    // CSF at query time, so they must be in its build set with value v0.
    std::vector<std::pair<Fingerprint, std::string>> csf_set;
    csf_set.reserve(members.size());
    for (size_t i = 0; i < n; i++) {
      if (values[i] != store.v0)
        csf_set.emplace_back(fps[i], values[i]);
      else if (query_bloom(bf, fps[i]))
        csf_set.emplace_back(fps[i], store.v0);
    }
    bool two_distinct = false;
    for (const auto& [fp, v] : csf_set)
      if (v != csf_set.front().second) {
        two_distinct = true;
        break;
      }
    if (!two_distinct) {
      // All CSF members share one value; add the first filter-negative v0
      // key so the codebook has two symbols. Its filter query is false, so
      // the extra entry is never consulted.
      for (size_t i = 0; i < n; i++) {
        if (values[i] == store.v0 && !query_bloom(bf, fps[i])) {
          csf_set.emplace_back(fps[i], store.v0);
          break;
        }
      }
    }
    store.kind = ColumnStore::Kind::kFiltered;
    store.filter = std::move(bf);
    store.csf = build_csf(csf_set, column_seed(cfg.master_seed, j), csf_opts, &stats.csf);
    stats.bloom_bits = store.filter->b;
  } else {
    std::vector<std::pair<Fingerprint, std::string>> csf_set;
    csf_set.reserve(n);
    for (size_t i = 0; i < n; i++) csf_set.emplace_back(fps[i], values[i]);
    store.kind = ColumnStore::Kind::kPlain;
    store.csf = build_csf(csf_set, column_seed(cfg.master_seed, j), csf_opts, &stats.csf);
  }
  stats.kind = store.kind;
  return store;
}

}  // namespace

CaramelTable build(const MatrixInput& input, const BuildConfig& cfg, TableBuildReport* report) {
  const size_t n = input.keys.size();
  if (n == 0) throw DataError("build requires at least one key");
  if (input.rows.size() != n) throw DataError("key and row counts differ");
  const size_t m = input.rows[0].size();
  if (m > 65535) throw DataError("more than 65535 columns unsupported");
  for (const auto& row : input.rows)
    if (row.size() != m) throw DataError("ragged rows: every row needs exactly m values");
  for (const auto& row : input.rows)
    for (const auto& v : row)
      if (v.size() > 65535) throw DataError("value longer than 65535 bytes unsupported");

  CaramelTable table;
  table.master_seed = cfg.master_seed;
  table.n_keys = n;
  table.m = static_cast<uint16_t>(m);
  table.delta = cfg.delta;
  table.permuted = cfg.permute;
  table.block_size = static_cast<uint16_t>(cfg.block_size);
  table.bloom_enabled = cfg.use_bloom;
  table.checksums = cfg.checksums;

  std::vector<Fingerprint> fps(n);
  for (size_t i = 0; i < n; i++) fps[i] = fingerprint(input.keys[i], cfg.master_seed);
  {
    std::vector<uint32_t> idx(n);
    for (uint32_t i = 0; i < n; i++) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](uint32_t a, uint32_t b) { return fps[a] < fps[b]; });
    for (size_t i = 1; i < n; i++) {
      if (fps[idx[i - 1]] == fps[idx[i]])
        throw DataError("duplicate keys: \"" + input.keys[idx[i - 1]] + "\" and \"" +
                        input.keys[idx[i]] + "\" collide");
    }
  }

  const Matrix* matrix = &input.rows;
  Matrix permuted;
  if (cfg.permute) {
    auto t0 = std::chrono::steady_clock::now();
    permuted = permute_rows(input.rows, cfg.block_size);
    matrix = &permuted;
    if (report)
      report->permute_seconds = std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
  }

  table.columns.resize(m);
  std::vector<ColumnBuildStats> col_stats(m);
  const uint32_t threads = std::min<uint32_t>(thread_budget(cfg.threads), std::max<size_t>(m, 1));
  if (threads <= 1 || m <= 1) {
    for (uint32_t j = 0; j < m; j++)
      table.columns[j] = build_column(fps, *matrix, j, cfg, col_stats[j]);
  } else {
    std::atomic<uint32_t> next{0};
    std::vector<std::exception_ptr> errors(m);
    auto worker = [&] {
      for (uint32_t j = next.fetch_add(1); j < m; j = next.fetch_add(1)) {
        try {
          table.columns[j] = build_column(fps, *matrix, j, cfg, col_stats[j]);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (uint32_t t = 0; t < threads; t++) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (uint32_t j = 0; j < m; j++)
      if (errors[j]) std::rethrow_exception(errors[j]);
  }
  if (report) report->columns = std::move(col_stats);
  return table;
}

const std::string& query(const CaramelTable& table, std::string_view key, uint32_t j) {
  if (j >= table.m) throw DataError("column index out of range");
  const ColumnStore& col = table.columns[j];
  if (col.kind == ColumnStore::Kind::kConstant) return col.v0;
  const Fingerprint fp = fingerprint(key, table.master_seed);
  if (col.kind == ColumnStore::Kind::kFiltered && !query_bloom(*col.filter, fp))
    return col.v0;
  return query_csf(*col.csf, fp);
}

std::vector<std::string> query_row(const CaramelTable& table, std::string_view key) {
  std::vector<std::string> out;
  out.reserve(table.m);
  for (uint32_t j = 0; j < table.m; j++) out.push_back(query(table, key, j));
  return out;
}

}  // namespace caramel
