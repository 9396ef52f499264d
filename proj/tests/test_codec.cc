#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <caramel/codec.hpp>
#include <caramel/errors.hpp>
#include <cmath>
#include <vector>

#include "test_util.hpp"

using namespace caramel;
using testutil::bounded;

namespace {

FrequencyTable table_of(const std::vector<std::pair<std::string, uint64_t>>& counts) {
  std::vector<FrequencyTable::Entry> entries;
  for (const auto& [v, c] : counts) entries.push_back({v, c});
  return make_frequency_table(std::move(entries));
}

double avg_length(const CanonicalCode& code, const FrequencyTable& ft) {
  double bits = 0;
  for (const auto& e : ft.entries) bits += double(e.count) * code.encode(e.value).length;
  return bits / double(ft.total);
}

// Smallest weighted length over every Kraft-feasible length assignment with
// lengths in [1, max_len]; exhaustive, so only usable for tiny alphabets.
double best_prefix_cost(const std::vector<uint64_t>& counts, int max_len) {
  size_t n = counts.size();
  std::vector<int> lens(n, 1);
  double best = 1e300;
  while (true) {
    double kraft = 0, cost = 0;
    for (size_t i = 0; i < n; i++) {
      kraft += std::ldexp(1.0, -lens[i]);
      cost += double(counts[i]) * lens[i];
    }
    if (kraft <= 1.0 + 1e-12 && cost < best) best = cost;
    size_t i = 0;
    while (i < n && lens[i] == max_len) lens[i++] = 1;
    if (i == n) break;
    lens[i]++;
  }
  return best;
}

uint64_t kraft_num(const CanonicalCode& code) {  // sum of 2^(58-len)
  uint64_t num = 0;
  for (const auto& s : code.symbols()) num += uint64_t{1} << (58 - s.length);
  return num;
}

}  // namespace

TEST_CASE("entropy closed forms") {
  CHECK(entropy(table_of({{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}})) == doctest::Approx(2.0));
  CHECK(entropy(table_of({{"a", 2}, {"b", 1}, {"c", 1}})) == doctest::Approx(1.5));
  CHECK(entropy(table_of({{"a", 9}})) == doctest::Approx(0.0));
  CHECK(entropy(table_of({{"a", 3}, {"b", 1}})) ==
        doctest::Approx(2.0 - 0.75 * std::log2(3.0)));
}

TEST_CASE("entropy of exactly uniform 1000 values is log2(1000)") {
  std::vector<std::pair<std::string, uint64_t>> counts;
  for (int i = 0; i < 1000; i++) counts.push_back({"v" + std::to_string(i), 7});
  CHECK(entropy(table_of(counts)) == doctest::Approx(std::log2(1000.0)).epsilon(1e-12));
}

TEST_CASE("frequency table sorted by count desc then value asc") {
  FrequencyTable ft = make_frequency_table(
      std::vector<std::string>{"z", "a", "m", "b", "z", "m"});
  REQUIRE(ft.entries.size() == 4);
  CHECK(ft.entries[0].value == "m");
  CHECK(ft.entries[1].value == "z");
  CHECK(ft.entries[2].value == "a");
  CHECK(ft.entries[3].value == "b");
  CHECK(ft.total == 6);
}

TEST_CASE("half-quarter-quarter code: a=0 b=10 c=11, '1011' decodes (b,c)") {
  FrequencyTable ft = table_of({{"a", 2}, {"b", 1}, {"c", 1}});
  CanonicalCode code = build_code(ft);
  CHECK(code.encode("a").length == 1);
  CHECK(code.encode("b").length == 2);
  CHECK(code.encode("c").length == 2);
  CHECK(code.encode("a").bits == 0b0);
  CHECK(code.encode("b").bits == 0b10);
  CHECK(code.encode("c").bits == 0b11);

  const bool stream[] = {1, 0, 1, 1};
  size_t pos = 0;
  auto next = [&] { return stream[pos++]; };
  auto [i1, used1] = code.decode_prefix(next);
  CHECK(code.value(i1) == "b");
  CHECK(used1 == 2);
  auto [i2, used2] = code.decode_prefix(next);
  CHECK(code.value(i2) == "c");
  CHECK(used2 == 2);
}

TEST_CASE("two equal values get lengths (1,1); 256 uniform get length 8") {
  CanonicalCode two = build_code(table_of({{"x", 5}, {"y", 5}}));
  CHECK(two.encode("x").length == 1);
  CHECK(two.encode("y").length == 1);

  std::vector<std::pair<std::string, uint64_t>> counts;
  for (int i = 0; i < 256; i++) counts.push_back({"s" + std::to_string(i), 3});
  FrequencyTable ft = table_of(counts);
  CanonicalCode code = build_code(ft);
  for (const auto& s : code.symbols()) CHECK(s.length == 8);
  CHECK(avg_length(code, ft) == doctest::Approx(entropy(ft)));
}

TEST_CASE("optimality vs exhaustive prefix-code search, |supp| <= 5") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 100; trial++) {
    size_t n = 2 + bounded(rng, 4);
    std::vector<std::pair<std::string, uint64_t>> counts;
    for (size_t i = 0; i < n; i++)
      counts.push_back({"v" + std::to_string(i), 1 + bounded(rng, 1000)});
    FrequencyTable ft = table_of(counts);
    CanonicalCode code = build_code(ft);
    double built = avg_length(code, ft) * double(ft.total);
    std::vector<uint64_t> sorted_counts;
    for (const auto& e : ft.entries) sorted_counts.push_back(e.count);
    CHECK(built == doctest::Approx(best_prefix_cost(sorted_counts, 7)));
  }
}

TEST_CASE("Kraft equality exact on built codes") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; trial++) {
    size_t n = 2 + bounded(rng, 200);
    std::vector<std::pair<std::string, uint64_t>> counts;
    for (size_t i = 0; i < n; i++)
      counts.push_back({"v" + std::to_string(i), 1 + bounded(rng, 10000)});
    CanonicalCode code = build_code(table_of(counts));
    CHECK(kraft_num(code) == uint64_t{1} << 58);
  }
}

TEST_CASE("entropy bound H0 <= avg < H0 + 1") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; trial++) {
    size_t n = 2 + bounded(rng, 500);
    std::vector<std::pair<std::string, uint64_t>> counts;
    for (size_t i = 0; i < n; i++)
      counts.push_back({"v" + std::to_string(i), 1 + bounded(rng, 99999)});
    FrequencyTable ft = table_of(counts);
    double avg = avg_length(build_code(ft), ft);
    CHECK(avg >= entropy(ft) - 1e-9);
    CHECK(avg < entropy(ft) + 1.0);
  }
}

TEST_CASE("canonical adjacency: next code = (prev+1) << (len delta)") {
  std::mt19937_64 rng(5);
  std::vector<std::pair<std::string, uint64_t>> counts;
  for (int i = 0; i < 40; i++) counts.push_back({"v" + std::to_string(i), 1 + bounded(rng, 50)});
  CanonicalCode code = build_code(table_of(counts));
  for (uint32_t i = 1; i < code.size(); i++) {
    Codeword prev = code.codeword(i - 1), cur = code.codeword(i);
    CHECK(cur.bits == (prev.bits + 1) << (cur.length - prev.length));
  }
}

TEST_CASE("round-trip every symbol of a random 1000-symbol code") {
  std::mt19937_64 rng(9);
  std::vector<std::pair<std::string, uint64_t>> counts;
  for (int i = 0; i < 1000; i++)
    counts.push_back({"sym" + std::to_string(i), 1 + bounded(rng, 5000)});
  FrequencyTable ft = table_of(counts);
  CanonicalCode code = build_code(ft);
  for (const auto& e : ft.entries) {
    Codeword cw = code.encode(e.value);
    uint32_t pos = 0;
    auto next = [&] { return cw.bit(pos++); };
    auto [idx, used] = code.decode_prefix(next);
    CHECK(code.value(idx) == e.value);
    CHECK(used == cw.length);
  }
}

TEST_CASE("complete codes decode arbitrary bit streams") {
  std::mt19937_64 rng(31);
  std::vector<std::pair<std::string, uint64_t>> counts;
  for (int i = 0; i < 17; i++) counts.push_back({"v" + std::to_string(i), 1 + bounded(rng, 60)});
  CanonicalCode code = build_code(table_of(counts));
  for (int trial = 0; trial < 2000; trial++) {
    uint64_t bits = rng();
    uint32_t pos = 0;
    auto next = [&] { return (bits >> (pos++ & 63)) & 1; };
    auto [idx, used] = code.decode_prefix(next);
    CHECK(idx < code.size());
    CHECK(used <= code.max_length());
  }
}

TEST_CASE("extra rarest symbol deepens the code by at most 1") {
  std::mt19937_64 rng(88);
  for (int trial = 0; trial < 30; trial++) {
    size_t n = 2 + bounded(rng, 60);
    std::vector<std::pair<std::string, uint64_t>> counts;
    for (size_t i = 0; i < n; i++)
      counts.push_back({"v" + std::to_string(i), 1 + bounded(rng, 400)});
    uint8_t before = build_code(table_of(counts)).max_length();
    counts.push_back({"w", 1});
    uint8_t after = build_code(table_of(counts)).max_length();
    CHECK(after <= before + 1);
  }
}

TEST_CASE("package-merge caps length and stays optimal at the cap") {
  SUBCASE("fibonacci counts trip the 58-bit default cap") {
    std::vector<std::pair<std::string, uint64_t>> counts;
    uint64_t a = 1, b = 1;
    for (int i = 0; i < 80; i++) {
      counts.push_back({"f" + std::to_string(i), a});
      uint64_t next = a + b;
      a = b;
      b = next;
    }
    FrequencyTable ft = table_of(counts);
    CanonicalCode code = build_code(ft);
    CHECK(code.max_length() <= 58);
    uint64_t num = 0;
    for (const auto& s : code.symbols()) num += uint64_t{1} << (58 - s.length);
    CHECK(num <= uint64_t{1} << 58);
    double avg = avg_length(code, ft);
    CHECK(avg >= entropy(ft) - 1e-9);
  }
  SUBCASE("cap 3 matches exhaustive constrained optimum") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 40; trial++) {
      size_t n = 2 + bounded(rng, 4);
      std::vector<std::pair<std::string, uint64_t>> counts;
      for (size_t i = 0; i < n; i++)
        counts.push_back({"v" + std::to_string(i), 1 + bounded(rng, 100)});
      FrequencyTable ft = table_of(counts);
      CanonicalCode code = build_code(ft, 3);
      CHECK(code.max_length() <= 3);
      std::vector<uint64_t> sorted_counts;
      for (const auto& e : ft.entries) sorted_counts.push_back(e.count);
      double built = avg_length(code, ft) * double(ft.total);
      CHECK(built == doctest::Approx(best_prefix_cost(sorted_counts, 3)));
    }
  }
}

TEST_CASE("from_symbols rejects bad codebooks") {
  CHECK_THROWS_AS(CanonicalCode::from_symbols({{"a", 2}, {"b", 1}}), FormatError);
  CHECK_THROWS_AS(CanonicalCode::from_symbols({{"b", 1}, {"a", 1}}), FormatError);
  CHECK_THROWS_AS(CanonicalCode::from_symbols({{"a", 1}, {"b", 1}, {"c", 1}}), FormatError);
  CHECK_THROWS_AS(CanonicalCode::from_symbols({{"a", 0}}), FormatError);
  CHECK_THROWS_AS(CanonicalCode::from_symbols({{"a", 59}}), FormatError);
}

TEST_CASE("incomplete codebook turns unmatched streams into corrupt-stream errors") {
  // Kraft sum 1/2: decodes "0..." but an all-ones stream never matches.
  CanonicalCode code = CanonicalCode::from_symbols({{"a", 1}});
  auto ones = [] { return true; };
  CHECK_THROWS_AS(code.decode_prefix(ones), FormatError);
  auto zeros = [] { return false; };
  auto [idx, used] = code.decode_prefix(zeros);
  CHECK(code.value(idx) == "a");
  CHECK(used == 1);
}

TEST_CASE("encode of unknown symbol throws") {
  CanonicalCode code = build_code(table_of({{"a", 1}, {"b", 1}}));
  CHECK_THROWS_AS(code.encode("zzz"), DataError);
}
