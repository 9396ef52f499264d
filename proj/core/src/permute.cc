#include <algorithm>
#include <map>
#include <queue>
#include <unordered_set>

#include "caramel/caramel.hpp"
#include "caramel/codec.hpp"

namespace caramel {

double column_entropy_sum(const Matrix& rows) {
  if (rows.empty()) return 0.0;
  const size_t m = rows[0].size();
  double sum = 0.0;
  std::vector<std::string> col(rows.size());
  for (size_t j = 0; j < m; j++) {
    for (size_t i = 0; i < rows.size(); i++) col[i] = rows[i][j];
    sum += entropy(make_frequency_table(col));
  }
  return sum;
}

Matrix permute_rows(const Matrix& rows, uint32_t block_size) {
  Matrix a = rows;
  const size_t n = a.size();
  if (n == 0) return a;
  const size_t m = a[0].size();
  if (m <= 1) return a;

  // T: value -> rows that still need it placed. std::map gives the
  // value-bytes-ascending order used to break scan ties.
  std::map<std::string, std::vector<uint32_t>> T;
  for (uint32_t r = 0; r < n; r++) {
    std::unordered_set<std::string_view> seen;
    for (const auto& v : a[r]) {
      if (!seen.insert(v).second) throw DataError("duplicate value within a row");
      T[v].push_back(r);
    }
  }

  // E: column -> rows already locked for that column.
  std::vector<BitVector> E(m, BitVector(n));

  // Candidate order: |T(v)| descending, then value bytes ascending. Lazy
  // heap; stale sizes are refreshed on pop.
  struct Cand {
    uint64_t size;
    const std::string* value;
  };
  auto cmp = [](const Cand& x, const Cand& y) {
    if (x.size != y.size) return x.size < y.size;
    return *x.value > *y.value;
  };
  std::priority_queue<Cand, std::vector<Cand>, decltype(cmp)> heap(cmp);
  for (const auto& [v, rs] : T) heap.push({rs.size(), &v});

  std::vector<Cand> revisit;
  while (true) {
    uint64_t best_w = 0;
    const std::string* best_v = nullptr;
    uint32_t best_c = 0;
    revisit.clear();
    while (!heap.empty()) {
      Cand cand = heap.top();
      const auto& rows_v = T.find(*cand.value)->second;
      if (cand.size != rows_v.size()) {  // stale; refresh
        heap.pop();
        if (!rows_v.empty()) heap.push({rows_v.size(), cand.value});
        continue;
      }
      if (cand.size <= best_w) break;  // upper-bound prune
      heap.pop();
      revisit.push_back(cand);
      for (uint32_t c = 0; c < m; c++) {
        uint64_t w = 0;
        for (uint32_t r : rows_v)
          if (!E[c].get(r)) w++;
        if (w == 0) continue;
        // Equal weights: smallest column, then smallest value bytes.
        bool better = w > best_w ||
                      (w == best_w &&
                       (c < best_c || (c == best_c && *cand.value < *best_v)));
        if (better) {
          best_w = w;
          best_v = cand.value;
          best_c = c;
        }
      }
    }
    for (const auto& cand : revisit) heap.push(cand);

    if (best_w <= block_size || best_v == nullptr) break;

    auto& rows_v = T.find(*best_v)->second;
    std::vector<uint32_t> kept;
    kept.reserve(rows_v.size() - best_w);
    for (uint32_t r : rows_v) {
      if (E[best_c].get(r)) {
        kept.push_back(r);
        continue;
      }
      auto& row = a[r];
      for (uint32_t c = 0; c < m; c++) {
        if (row[c] == *best_v) {
          std::swap(row[c], row[best_c]);
          break;
        }
      }
      E[best_c].set(r, true);
    }
    rows_v.swap(kept);
  }
  return a;
}

}  // namespace caramel
