#include <CLI11.hpp>
#include <caramel/caramel.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>

#include "bench.hpp"
#include "ingest.hpp"

namespace {

using namespace caramel;
using namespace caramel::cli;

int cmd_build(const IngestSpec& ingest, const std::string& gen, const std::string& out_path,
              const BuildConfig& cfg) {
  MatrixInput in = gen.empty() ? read_matrix(ingest) : generate(gen, cfg.master_seed);
  in.permutable = in.permutable || cfg.permute;
  double h0 = column_entropy_sum(in.rows);

  auto t0 = std::chrono::steady_clock::now();
  CaramelTable table = build(in, cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  save_file(table, out_path);

  uint64_t bytes = serialize(table).size();
  std::printf("built %s: N=%llu m=%u H0_sum=%.4f bits/row size=%llu B build=%.3f s\n",
              out_path.c_str(), (unsigned long long)table.n_keys, unsigned(table.m), h0,
              (unsigned long long)bytes, secs);
  return 0;
}

int cmd_query(const std::string& table_path, const std::string& key, uint32_t column,
              bool whole_row) {
  CaramelTable table = load_file(table_path);
  if (whole_row) {
    for (const std::string& v : query_row(table, key)) std::cout << v << '\n';
  } else {
    std::cout << query(table, key, column) << '\n';
  }
  return 0;
}

int cmd_stats(const std::string& table_path) {
  CaramelTable table = load_file(table_path);
  const char* kind_name[] = {"constant", "plain", "filtered"};
  std::printf("column\tkind\talpha\tentropy\tcode_bits\tbloom_bits\tg_bits\tpayload_bytes\n");
  uint32_t j = 0;
  for (const auto& cs : column_sizes(table)) {
    std::printf("%u\t%s\t%.6f\t%.6f\t%llu\t%llu\t%llu\t%llu\n", j++,
                kind_name[int(cs.kind)], cs.alpha, cs.entropy,
                (unsigned long long)cs.code_bits, (unsigned long long)cs.bloom_bits,
                (unsigned long long)cs.g_bits, (unsigned long long)cs.payload_bytes);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"caramel: compressed static-function key/value tables"};
  app.require_subcommand(1);

  IngestSpec ingest;
  std::string gen, out_path, table_path, key, suite;
  BuildConfig cfg;
  uint32_t column = 0;
  bool whole_row = false;
  uint64_t bench_seed = 1;

  CLI::App* b = app.add_subcommand("build", "Build a table from TSV/token data");
  CLI::Option* input = b->add_option("input", ingest.path, "Input file, or - for stdin");
  b->add_option("--gen", gen, "Synthetic data instead of a file: dist:NxM:V[:k]")
      ->excludes(input);
  b->add_option("-o,--out", out_path, "Output table path")->required();
  b->add_option("--format", ingest.format, "Input format")
      ->check(CLI::IsMember({"tsv", "tokens"}))
      ->capture_default_str();
  b->add_option("--key-col", ingest.key_col, "TSV column holding the key")
      ->capture_default_str();
  b->add_option("--token-cols", ingest.token_cols,
                "tokens: row width (pad/truncate); 0 infers from first line");
  b->add_option("--pad", ingest.pad, "tokens: pad value for short rows")
      ->capture_default_str();
  b->add_flag("--permute", cfg.permute, "Reorder values within rows to cut entropy");
  b->add_option("--block-size", cfg.block_size, "Permutation early-stop threshold")
      ->capture_default_str();
  b->add_option("--delta", cfg.delta, "Solver overhead constant for the filter decision")
      ->capture_default_str();
  b->add_option("--seed", cfg.master_seed, "Master seed")->capture_default_str();
  b->add_flag("!--no-bloom", cfg.use_bloom, "Disable Bloom prefilters");
  b->add_flag("!--no-checksums", cfg.checksums, "Skip per-column checksums");
  b->add_option("--chunk-keys", cfg.target_chunk_keys, "Target keys per solver chunk")
      ->capture_default_str();
  b->add_option("--threads", cfg.threads, "Column build threads (0 = hardware)");

  CLI::App* q = app.add_subcommand(
      "query", "Look up a key. Keys absent at build time return an arbitrary "
               "codebook value (membership is not stored); exit is still 0.");
  q->add_option("table", table_path, "Table file")->required();
  q->add_option("key", key, "Key to look up")->required();
  CLI::Option* col = q->add_option("-c,--column", column, "Column index")
                         ->capture_default_str();
  q->add_flag("--row", whole_row, "Print every column, one value per line")->excludes(col);

  CLI::App* s = app.add_subcommand("stats", "Per-column storage breakdown (TSV)");
  s->add_option("table", table_path, "Table file")->required();

  CLI::App* be = app.add_subcommand("bench", "Reproducible benchmark suites (TSV)");
  be->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember({"uniform", "powerlaw", "bloom-sweep", "permute", "latency"}))
      ->required();
  be->add_option("--seed", bench_seed, "Dataset and build seed")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (b->parsed()) {
      if (gen.empty() && ingest.path.empty())
        throw CLI::RequiredError("input (or --gen)");
      return cmd_build(ingest, gen, out_path, cfg);
    }
    if (q->parsed()) return cmd_query(table_path, key, column, whole_row);
    if (s->parsed()) return cmd_stats(table_path);
    run_bench(suite, bench_seed, std::cout);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const BuildError& e) {
    std::fprintf(stderr, "build error: %s\n", e.what());
    return 3;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
