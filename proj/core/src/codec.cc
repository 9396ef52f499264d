#include "caramel/codec.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace caramel {

namespace {

void sort_frequency_entries(std::vector<FrequencyTable::Entry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.value < b.value;
  });
}

}  // namespace

FrequencyTable make_frequency_table(const std::vector<std::string>& values) {
  std::unordered_map<std::string, uint64_t> counts;
  for (const auto& v : values) counts[v]++;
  std::vector<FrequencyTable::Entry> entries;
  entries.reserve(counts.size());
  for (auto& [v, c] : counts) entries.push_back({v, c});
  return make_frequency_table(std::move(entries));
}

FrequencyTable make_frequency_table(std::vector<FrequencyTable::Entry> entries) {
  FrequencyTable ft;
  ft.entries = std::move(entries);
  sort_frequency_entries(ft.entries);
  for (const auto& e : ft.entries) ft.total += e.count;
  return ft;
}

double entropy(const FrequencyTable& ft) {
  double h = 0.0;
  const double n = static_cast<double>(ft.total);
  for (const auto& e : ft.entries) {
    if (e.count == 0) continue;
    const double p = static_cast<double>(e.count) / n;
    h -= p * std::log2(p);
  }
  return h;
}

Codeword CanonicalCode::codeword(uint32_t idx) const {
  const uint8_t len = symbols_[idx].length;
  const uint64_t code = first_code_[len] + (idx - offset_[len]);
  return Codeword{code, len};
}

Codeword CanonicalCode::encode(std::string_view v) const {
  auto it = index_.find(std::string(v));
  if (it == index_.end()) throw DataError("unknown symbol in encode");
  return codeword(it->second);
}

CanonicalCode CanonicalCode::from_symbols(std::vector<Symbol> symbols) {
  CanonicalCode c;
  c.symbols_ = std::move(symbols);
  if (c.symbols_.empty()) throw DataError("empty codebook");
  c.max_length_ = 0;
  for (size_t i = 0; i < c.symbols_.size(); i++) {
    const auto& s = c.symbols_[i];
    if (s.length == 0 || s.length > 58) throw FormatError("codeword length out of range");
    if (i > 0) {
      const auto& p = c.symbols_[i - 1];
      if (s.length < p.length || (s.length == p.length && s.value <= p.value))
        throw FormatError("codebook not in canonical order");
    }
    c.max_length_ = std::max(c.max_length_, s.length);
  }

  c.count_.assign(c.max_length_ + 1, 0);
  c.offset_.assign(c.max_length_ + 1, 0);
  c.first_code_.assign(c.max_length_ + 1, 0);
  for (const auto& s : c.symbols_) c.count_[s.length]++;

  // Kraft sum in units of 2^-max_length.
  unsigned __int128 kraft = 0;
  for (uint32_t l = 1; l <= c.max_length_; l++)
    kraft += static_cast<unsigned __int128>(c.count_[l]) << (c.max_length_ - l);
  if (kraft > (static_cast<unsigned __int128>(1) << c.max_length_))
    throw FormatError("codebook violates Kraft inequality");

  uint64_t code = 0;
  uint32_t idx = 0;
  for (uint32_t l = 1; l <= c.max_length_; l++) {
    code <<= 1;
    c.first_code_[l] = code;
    c.offset_[l] = idx;
    code += c.count_[l];
    idx += c.count_[l];
  }

  c.index_.reserve(c.symbols_.size());
  for (uint32_t i = 0; i < c.symbols_.size(); i++) c.index_[c.symbols_[i].value] = i;
  return c;
}

namespace {

// Plain Huffman code lengths via the two-queue method. Leaves must be sorted
// by weight ascending; ties resolved by preferring leaves over packages.
std::vector<uint8_t> huffman_lengths(const std::vector<uint64_t>& weights) {
  const size_t n = weights.size();
  std::vector<uint8_t> depth(2 * n - 1, 0);
  std::vector<int64_t> parent(2 * n - 1, -1);
  std::vector<uint64_t> weight(2 * n - 1, 0);
  for (size_t i = 0; i < n; i++) weight[i] = weights[i];

  std::deque<size_t> leaves, internal;
  for (size_t i = 0; i < n; i++) leaves.push_back(i);
  size_t next = n;
  auto pop_min = [&]() {
    if (!leaves.empty() &&
        (internal.empty() || weight[leaves.front()] <= weight[internal.front()])) {
      size_t i = leaves.front();
      leaves.pop_front();
      return i;
    }
    size_t i = internal.front();
    internal.pop_front();
    return i;
  };
  while (leaves.size() + internal.size() >= 2) {
    size_t a = pop_min();
    size_t b = pop_min();
    weight[next] = weight[a] + weight[b];
    parent[a] = parent[b] = static_cast<int64_t>(next);
    internal.push_back(next);
    next++;
  }
  // Depths top-down: nodes were created in increasing index order, so a
  // parent always has a larger index than its children.
  for (size_t i = next - 1; i-- > 0;)
    depth[i] = static_cast<uint8_t>(depth[parent[i]] + 1);
  return {depth.begin(), depth.begin() + static_cast<int64_t>(n)};
}

// Length-limited Huffman lengths by package-merge. Exact; only invoked when
// plain Huffman exceeds the cap, which needs quasi-Fibonacci weight growth
// and therefore small n at any realistic total count.
std::vector<uint8_t> package_merge_lengths(const std::vector<uint64_t>& weights, int max_len) {
  const size_t n = weights.size();
  if ((max_len < 64 && n > (uint64_t{1} << max_len)) || n > (uint64_t{1} << 32))
    throw BuildError("alphabet too large for length-limited code");
  if (n > 65536) throw BuildError("package-merge fallback not sized for this alphabet");

  struct Pkg {
    uint64_t weight;
    std::vector<uint32_t> items;
  };
  std::vector<Pkg> level;
  auto items_sorted = [&]() {
    std::vector<Pkg> v;
    v.reserve(n);
    for (uint32_t i = 0; i < n; i++) v.push_back({weights[i], {i}});
    return v;  // weights already ascending
  };
  level = items_sorted();
  for (int l = 1; l < max_len; l++) {
    std::vector<Pkg> packaged;
    packaged.reserve(level.size() / 2);
    for (size_t i = 0; i + 1 < level.size(); i += 2) {
      Pkg p;
      p.weight = level[i].weight + level[i + 1].weight;
      p.items = level[i].items;
      p.items.insert(p.items.end(), level[i + 1].items.begin(), level[i + 1].items.end());
      packaged.push_back(std::move(p));
    }
    std::vector<Pkg> merged = items_sorted();
    merged.reserve(merged.size() + packaged.size());
    for (auto& p : packaged) merged.push_back(std::move(p));
    std::stable_sort(merged.begin(), merged.end(),
                     [](const Pkg& a, const Pkg& b) { return a.weight < b.weight; });
    level = std::move(merged);
  }
  std::vector<uint8_t> lengths(n, 0);
  const size_t take = 2 * n - 2;
  for (size_t i = 0; i < take && i < level.size(); i++)
    for (uint32_t item : level[i].items) lengths[item]++;
  return lengths;
}

}  // namespace

CanonicalCode build_code(const FrequencyTable& ft, int max_length) {
  const size_t n = ft.entries.size();
  if (n < 2) throw DataError("build_code requires at least 2 distinct values");
  if (n > (uint64_t{1} << 32)) throw DataError("unsupported cardinality (> 2^32 values)");
  if (max_length < 1 || max_length > 58) throw DataError("max_length out of range");

  // Merge order: (count, value bytes) ascending.
  std::vector<const FrequencyTable::Entry*> order;
  order.reserve(n);
  for (const auto& e : ft.entries) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->count != b->count) return a->count < b->count;
    return a->value < b->value;
  });
  std::vector<uint64_t> weights;
  weights.reserve(n);
  for (const auto* e : order) weights.push_back(e->count);

  std::vector<uint8_t> lengths = huffman_lengths(weights);
  if (*std::max_element(lengths.begin(), lengths.end()) > max_length)
    lengths = package_merge_lengths(weights, max_length);

  std::vector<CanonicalCode::Symbol> symbols;
  symbols.reserve(n);
  for (size_t i = 0; i < n; i++) symbols.push_back({order[i]->value, lengths[i]});
  std::sort(symbols.begin(), symbols.end(), [](const auto& a, const auto& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.value < b.value;
  });
  return CanonicalCode::from_symbols(std::move(symbols));
}

}  // namespace caramel
