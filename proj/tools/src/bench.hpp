#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace caramel::cli {

// Suites: uniform, powerlaw, bloom-sweep, permute, latency. Emits one TSV
// header row plus one row per (dataset, variant) to `out`.
void run_bench(const std::string& suite, uint64_t seed, std::ostream& out);

}  // namespace caramel::cli
