#include <benchmark/benchmark.h>

#include <caramel/caramel.hpp>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

using namespace caramel;

namespace {

uint64_t bounded(std::mt19937_64& rng, uint64_t n) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

std::vector<std::string> make_keys(size_t n) {
  std::vector<std::string> keys;
  keys.reserve(n);
  for (size_t i = 0; i < n; i++) keys.push_back("key-" + std::to_string(i));
  return keys;
}

const CaramelTable& table_100k() {
  static CaramelTable table = [] {
    MatrixInput in;
    std::mt19937_64 rng(1);
    for (const auto& k : make_keys(100000)) {
      in.keys.push_back(k);
      in.rows.push_back({std::to_string(bounded(rng, 1000))});
    }
    return build(in, {});
  }();
  return table;
}

void BM_Fingerprint(benchmark::State& state) {
  std::string key(state.range(0), 'k');
  for (auto _ : state) benchmark::DoNotOptimize(fingerprint(key, 1));
  state.SetBytesProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Fingerprint)->Arg(8)->Arg(64)->Arg(1024);

void BM_CsfQuery(benchmark::State& state) {
  const CaramelTable& table = table_100k();
  std::vector<std::string> keys = make_keys(100000);
  std::mt19937_64 rng(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(query(table, keys[bounded(rng, keys.size())], 0));
}
BENCHMARK(BM_CsfQuery);

void BM_HashMapLookup(benchmark::State& state) {
  static std::unordered_map<std::string, std::string> map = [] {
    std::unordered_map<std::string, std::string> m;
    std::mt19937_64 rng(1);
    for (const auto& k : make_keys(100000)) m[k] = std::to_string(bounded(rng, 1000));
    return m;
  }();
  std::vector<std::string> keys = make_keys(100000);
  std::mt19937_64 rng(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(map.find(keys[bounded(rng, keys.size())])->second);
}
BENCHMARK(BM_HashMapLookup);

void BM_BloomQuery(benchmark::State& state) {
  static BloomFilter bf = [] {
    std::vector<Fingerprint> fps;
    for (size_t i = 0; i < 100000; i++)
      fps.push_back(fingerprint("member-" + std::to_string(i), 3));
    return build_bloom(fps, 0.01);
  }();
  std::mt19937_64 rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(query_bloom(bf, {rng(), rng()}));
}
BENCHMARK(BM_BloomQuery);

void BM_CsfBuild(benchmark::State& state) {
  const size_t n = state.range(0);
  std::vector<std::pair<Fingerprint, std::string>> pairs;
  std::mt19937_64 rng(5);
  for (size_t i = 0; i < n; i++)
    pairs.emplace_back(fingerprint("key-" + std::to_string(i), 5),
                       std::to_string(bounded(rng, 100)));
  for (auto _ : state) benchmark::DoNotOptimize(build_csf(pairs, 9, {}, nullptr));
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(n));
}
BENCHMARK(BM_CsfBuild)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Serialize(benchmark::State& state) {
  const CaramelTable& table = table_100k();
  for (auto _ : state) benchmark::DoNotOptimize(serialize(table));
}
BENCHMARK(BM_Serialize);

}  // namespace

BENCHMARK_MAIN();
