#include "ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace caramel::cli {

namespace {

[[noreturn]] void fail(const std::string& path, size_t line, const std::string& msg) {
  throw DataError(path + ":" + std::to_string(line) + ": " + msg);
}

MatrixInput read_tsv(std::istream& in, const IngestSpec& spec) {
  MatrixInput out;
  out.permutable = spec.permutable;
  std::string line;
  size_t line_no = 0;
  size_t arity = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    for (size_t tab = line.find('\t'); ; tab = line.find('\t', start)) {
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (arity == 0) {
      arity = fields.size();
      if (arity < 2) fail(spec.path, line_no, "need a key and at least one value column");
      if (spec.key_col >= arity) fail(spec.path, line_no, "--key-col out of range");
    } else if (fields.size() != arity) {
      fail(spec.path, line_no,
           "expected " + std::to_string(arity) + " columns, got " +
               std::to_string(fields.size()));
    }
    out.keys.push_back(std::move(fields[spec.key_col]));
    std::vector<std::string> row;
    row.reserve(arity - 1);
    for (size_t c = 0; c < arity; c++)
      if (c != spec.key_col) row.push_back(std::move(fields[c]));
    out.rows.push_back(std::move(row));
  }
  if (out.keys.empty()) fail(spec.path, line_no, "no data rows");
  return out;
}

MatrixInput read_tokens(std::istream& in, const IngestSpec& spec) {
  MatrixInput out;
  out.permutable = spec.permutable;
  std::string line;
  size_t line_no = 0;
  size_t width = spec.token_cols;
  while (std::getline(in, line)) {
    line_no++;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> row;
    std::string tok;
    while (ls >> tok) row.push_back(std::move(tok));
    if (row.empty()) continue;
    if (width == 0) width = row.size();
    if (row.size() > width) row.resize(width);
    while (row.size() < width) row.push_back(spec.pad);
    out.keys.push_back(std::to_string(line_no));
    out.rows.push_back(std::move(row));
  }
  if (out.keys.empty()) fail(spec.path, line_no, "no data rows");
  return out;
}

}  // namespace

MatrixInput read_matrix(const IngestSpec& spec) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (spec.path != "-") {
    file.open(spec.path);
    if (!file) throw DataError("cannot open: " + spec.path);
    in = &file;
  }
  if (spec.format == "tsv") return read_tsv(*in, spec);
  if (spec.format == "tokens") return read_tokens(*in, spec);
  throw DataError("unknown ingest format: " + spec.format);
}

MatrixInput generate(const std::string& spec, uint64_t seed) {
  std::string dist;
  uint64_t n = 0, m = 0, v = 0;
  double k = 2.0;
  {
    std::vector<std::string> parts;
    size_t start = 0;
    for (size_t colon = spec.find(':'); ; colon = spec.find(':', start)) {
      parts.push_back(spec.substr(start, colon - start));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    auto bad = [&] { throw DataError("bad --gen spec (want dist:NxM:V[:k]): " + spec); };
    if (parts.size() < 3 || parts.size() > 4) bad();
    dist = parts[0];
    size_t x = parts[1].find('x');
    if (x == std::string::npos) bad();
    try {
      n = std::stoull(parts[1].substr(0, x));
      m = std::stoull(parts[1].substr(x + 1));
      v = std::stoull(parts[2]);
      if (parts.size() == 4) k = std::stod(parts[3]);
    } catch (const std::exception&) {
      bad();
    }
    if (n == 0 || m == 0 || v == 0 || (dist != "uniform" && dist != "powerlaw")) bad();
  }

  std::mt19937_64 rng(seed);
  std::vector<double> cdf;
  if (dist == "powerlaw") {
    cdf.resize(v);
    double z = 0;
    for (uint64_t i = 0; i < v; i++) cdf[i] = (z += std::pow(double(i + 1), -k));
    for (double& c : cdf) c /= z;
  }
  auto draw = [&]() -> uint64_t {
    if (dist == "uniform") return bounded(rng, v);
    double u = double(rng() >> 11) * 0x1.0p-53;
    uint64_t i = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    return std::min(i, v - 1);
  };

  MatrixInput out;
  out.keys.reserve(n);
  out.rows.reserve(n);
  for (uint64_t i = 0; i < n; i++) {
    out.keys.push_back("key-" + std::to_string(i));
    std::vector<std::string> row;
    row.reserve(m);
    for (uint64_t j = 0; j < m; j++) row.push_back(std::to_string(draw()));
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace caramel::cli
