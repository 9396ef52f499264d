#include <bit>
#include <cstring>
#include <fstream>

#include "caramel/caramel.hpp"

namespace caramel {

namespace {

constexpr char kMagic[4] = {'C', 'R', 'M', 'L'};
constexpr size_t kHeaderBytes = 40;
constexpr uint64_t kMaxBitLen = uint64_t{1} << 48;  // corrupt-length guard

class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) { le(v, 2); }
  void u32(uint32_t v) { le(v, 4); }
  void u64(uint64_t v) { le(v, 8); }
  void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
  void bytes(const void* p, size_t n) {
    const auto* b = static_cast<const uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  void str(std::string_view s) { bytes(s.data(), s.size()); }
  void pad_to(size_t align) {
    while (buf_.size() % align) buf_.push_back(0);
  }

  size_t size() const { return buf_.size(); }
  std::string_view view() const {
    return {reinterpret_cast<const char*>(buf_.data()), buf_.size()};
  }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  void le(uint64_t v, int n) {
    for (int i = 0; i < n; i++) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const uint8_t* p, size_t n) : p_(p), len_(n) {}

  uint8_t u8() { return *need(1); }
  uint16_t u16() { return static_cast<uint16_t>(le(2)); }
  uint32_t u32() { return static_cast<uint32_t>(le(4)); }
  uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str(size_t n) {
    const uint8_t* p = need(n);
    return {reinterpret_cast<const char*>(p), n};
  }
  const uint8_t* raw(size_t n) { return need(n); }
  void skip(size_t n) { need(n); }
  size_t remaining() const { return len_ - pos_; }

 private:
  const uint8_t* need(size_t n) {
    if (n > len_ - pos_) throw FormatError("truncated table file");
    const uint8_t* p = p_ + pos_;
    pos_ += n;
    return p;
  }
  uint64_t le(int n) {
    const uint8_t* p = need(n);
    uint64_t v = 0;
    for (int i = 0; i < n; i++) v |= uint64_t{p[i]} << (8 * i);
    return v;
  }
  const uint8_t* p_;
  size_t len_;
  size_t pos_ = 0;
};

void write_bits(ByteWriter& w, const BitVector& v) {
  w.u64(v.size());
  for (uint64_t word : v.words()) w.u64(word);
}

BitVector read_bits(ByteReader& r) {
  uint64_t bits = r.u64();
  if (bits > kMaxBitLen) throw FormatError("implausible bit-vector length");
  BitVector v(bits);
  for (uint64_t& word : v.words()) word = r.u64();
  return v;
}

void write_csf(ByteWriter& w, const CsfColumn& csf) {
  w.u64(csf.master_seed);
  w.u32(csf.chunk_count);
  w.u32(csf.code.size());
  for (const auto& s : csf.code.symbols()) {
    w.u8(s.length);
    w.u16(static_cast<uint16_t>(s.value.size()));
    w.str(s.value);
  }
  for (const auto& c : csf.chunks) {
    w.u64(c.seed);
    write_bits(w, c.g);
  }
}

CsfColumn read_csf(ByteReader& r) {
  CsfColumn csf;
  csf.master_seed = r.u64();
  csf.chunk_count = r.u32();
  if (csf.chunk_count == 0 || (csf.chunk_count & (csf.chunk_count - 1)))
    throw FormatError("csf chunk count must be a power of two");
  uint32_t n_symbols = r.u32();
  if (n_symbols < 2) throw FormatError("csf codebook needs at least 2 symbols");
  std::vector<CanonicalCode::Symbol> symbols(n_symbols);
  for (auto& s : symbols) {
    s.length = r.u8();
    s.value = r.str(r.u16());
  }
  csf.code = CanonicalCode::from_symbols(std::move(symbols));
  csf.chunks.resize(csf.chunk_count);
  for (auto& c : csf.chunks) {
    c.seed = r.u64();
    c.g = read_bits(r);
  }
  return csf;
}

void write_bloom(ByteWriter& w, const BloomFilter& bf) {
  w.u64(bf.n);
  w.f64(bf.eps);
  w.u32(bf.k);
  write_bits(w, bf.bits);
}

BloomFilter read_bloom(ByteReader& r) {
  BloomFilter bf;
  bf.n = r.u64();
  bf.eps = r.f64();
  bf.k = r.u32();
  if (bf.k == 0) throw FormatError("bloom filter needs at least one probe");
  bf.bits = read_bits(r);
  bf.b = bf.bits.size();
  if (bf.b == 0) throw FormatError("bloom filter needs at least one bit");
  return bf;
}

void write_column_payload(ByteWriter& w, const ColumnStore& col) {
  w.u8(static_cast<uint8_t>(col.kind));
  switch (col.kind) {
    case ColumnStore::Kind::kConstant:
      w.u32(static_cast<uint32_t>(col.v0.size()));
      w.str(col.v0);
      break;
    case ColumnStore::Kind::kPlain:
      w.f64(col.alpha);
      w.f64(col.entropy);
      write_csf(w, *col.csf);
      break;
    case ColumnStore::Kind::kFiltered:
      w.f64(col.alpha);
      w.f64(col.entropy);
      w.u32(static_cast<uint32_t>(col.v0.size()));
      w.str(col.v0);
      write_bloom(w, *col.filter);
      write_csf(w, *col.csf);
      break;
  }
}

ColumnStore read_column_payload(ByteReader& r) {
  ColumnStore col;
  uint8_t tag = r.u8();
  switch (tag) {
    case 0:
      col.kind = ColumnStore::Kind::kConstant;
      col.v0 = r.str(r.u32());
      col.alpha = 1.0;
      col.entropy = 0.0;
      break;
    case 1:
      col.kind = ColumnStore::Kind::kPlain;
      col.alpha = r.f64();
      col.entropy = r.f64();
      col.csf = read_csf(r);
      break;
    case 2:
      col.kind = ColumnStore::Kind::kFiltered;
      col.alpha = r.f64();
      col.entropy = r.f64();
      col.v0 = r.str(r.u32());
      col.filter = read_bloom(r);
      col.csf = read_csf(r);
      break;
    default:
      throw FormatError("unknown column tag");
  }
  if (r.remaining()) throw FormatError("column payload has trailing bytes");
  return col;
}

}  // namespace

std::vector<uint8_t> serialize(const CaramelTable& table) {
  ByteWriter w;
  w.bytes(kMagic, 4);
  w.u16(table.version);
  w.u8(table.hash_id);
  w.u8(table.checksums ? 1 : 0);
  w.u64(table.master_seed);
  w.u64(table.n_keys);
  w.u16(table.m);
  w.f64(table.delta);
  w.u8(table.permuted ? 1 : 0);
  w.u16(table.block_size);
  w.u8(table.bloom_enabled ? 1 : 0);
  w.pad_to(kHeaderBytes);

  for (const auto& col : table.columns) {
    ByteWriter pw;
    write_column_payload(pw, col);
    w.u64(pw.size());
    w.bytes(pw.view().data(), pw.size());
    w.pad_to(8);
    if (table.checksums) w.u64(fingerprint(pw.view(), table.master_seed).lo);
  }
  return w.take();
}

CaramelTable deserialize(const std::vector<uint8_t>& bytes) {
  ByteReader r(bytes.data(), bytes.size());
  char magic[4];
  std::memcpy(magic, r.raw(4), 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("not a caramel table (bad magic)");

  CaramelTable table;
  table.version = r.u16();
  if (table.version != 1) throw FormatError("unsupported table version");
  table.hash_id = r.u8();
  if (table.hash_id != 1) throw FormatError("unsupported hash function id");
  uint8_t flags = r.u8();
  if (flags & ~uint8_t{1}) throw FormatError("unknown header flags");
  table.checksums = flags & 1;
  table.master_seed = r.u64();
  table.n_keys = r.u64();
  table.m = r.u16();
  table.delta = r.f64();
  table.permuted = r.u8() != 0;
  table.block_size = r.u16();
  table.bloom_enabled = r.u8() != 0;
  r.skip(kHeaderBytes - 38);

  table.columns.reserve(table.m);
  for (uint32_t j = 0; j < table.m; j++) {
    uint64_t payload_len = r.u64();
    if (payload_len > kMaxBitLen) throw FormatError("implausible column payload length");
    const uint8_t* payload = r.raw(payload_len);
    r.skip((8 - payload_len % 8) % 8);
    if (table.checksums) {
      uint64_t want = fingerprint(
          {reinterpret_cast<const char*>(payload), payload_len}, table.master_seed).lo;
      if (r.u64() != want) throw FormatError("column checksum mismatch");
    }
    ByteReader pr(payload, payload_len);
    table.columns.push_back(read_column_payload(pr));
  }
  if (r.remaining()) throw FormatError("trailing bytes after last column");
  return table;
}

void save_file(const CaramelTable& table, const std::string& path) {
  std::vector<uint8_t> bytes = serialize(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed: " + path);
}

CaramelTable load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw FormatError("cannot open: " + path);
  std::vector<uint8_t> bytes(static_cast<size_t>(in.tellg()));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!in) throw FormatError("read failed: " + path);
  return deserialize(bytes);
}

std::vector<ColumnSizes> column_sizes(const CaramelTable& table) {
  std::vector<ColumnSizes> out;
  out.reserve(table.columns.size());
  for (const auto& col : table.columns) {
    ColumnSizes cs{col.kind, col.alpha, col.entropy, 0, 0, 0, 0};
    if (col.csf) {
      for (const auto& s : col.csf->code.symbols()) cs.code_bits += 8 * (3 + s.value.size());
      cs.g_bits = col.csf->g_bits();
    }
    if (col.filter) cs.bloom_bits = col.filter->b;
    ByteWriter pw;
    write_column_payload(pw, col);
    cs.payload_bytes = pw.size();
    out.push_back(cs);
  }
  return out;
}

}  // namespace caramel
