#pragma once

// Binary sieve cache ("DZSV"). Layout, all integers little-endian:
//   "DZSV" | u16 version | u16 n, n bytes field spec | u64 X
//   | u64 k, k * (u64 p, u64 norm, u32 multiplicity)        prime-ideal classes
//   | 3 * (u8 kind, u8 width, X * width-byte signed values)  coefficient tables
//   | u32 CRC32 of everything before it

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "dzlab/error.hpp"
#include "dzlab/sieve.hpp"

namespace dzlab {

inline constexpr std::uint16_t kCacheVersion = 1;

namespace detail {

class ByteWriter {
 public:
  template <typename T>
  void put(T v, int bytes = sizeof(T)) {
    auto u = static_cast<unsigned __int128>(static_cast<__int128>(v));
    for (int i = 0; i < bytes; ++i) {
      buf_.push_back(static_cast<unsigned char>(u & 0xff));
      u >>= 8;
    }
  }
  void put_bytes(const std::string& s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  std::vector<unsigned char>& bytes() { return buf_; }

 private:
  std::vector<unsigned char> buf_;
};

class ByteReader {
 public:
  ByteReader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

  unsigned __int128 get_unsigned(int bytes) {
    need(static_cast<std::size_t>(bytes));
    unsigned __int128 u = 0;
    for (int i = bytes - 1; i >= 0; --i) u = (u << 8) | data_[pos_ + static_cast<std::size_t>(i)];
    pos_ += static_cast<std::size_t>(bytes);
    return u;
  }
  /// Sign-extends a `bytes`-wide two's-complement value.
  int128 get_signed(int bytes) {
    unsigned __int128 u = get_unsigned(bytes);
    if (bytes < 16 && ((u >> (8 * bytes - 1)) & 1)) u |= ~static_cast<unsigned __int128>(0) << (8 * bytes);
    return static_cast<int128>(u);
  }
  std::string get_string(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > size_) throw Error(ErrorCode::CacheFormat, "cache file is truncated");
  }
  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

inline std::uint32_t crc32_of(const unsigned char* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, data, chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace detail

inline std::vector<unsigned char> encode_cache(const FieldTables& t) {
  detail::ByteWriter w;
  w.put_bytes("DZSV");
  w.put<std::uint16_t>(kCacheVersion);
  const std::string& spec = t.ideal_count.field_spec();
  if (spec.size() > 0xffff) throw Error(ErrorCode::CacheFormat, "field spec too long for the cache header");
  w.put<std::uint16_t>(static_cast<std::uint16_t>(spec.size()));
  w.put_bytes(spec);
  w.put<std::uint64_t>(t.X());
  w.put<std::uint64_t>(t.primes.items.size());
  for (const auto& it : t.primes.items) {
    w.put<std::uint64_t>(it.p);
    w.put<std::uint64_t>(it.norm);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(it.multiplicity));
  }
  for (const CoeffTable* table : {&t.ideal_count, &t.totient_sum, &t.moebius_sum}) {
    const int width = table->width_bytes();
    w.put<std::uint8_t>(static_cast<std::uint8_t>(table->kind()));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(width));
    for (std::uint64_t m = 1; m <= table->X(); ++m) w.put((*table)[m], width);
  }
  auto& bytes = w.bytes();
  const std::uint32_t crc = detail::crc32_of(bytes.data(), bytes.size());
  w.put<std::uint32_t>(crc);
  return std::move(bytes);
}

inline FieldTables decode_cache(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 + 2 + 4) throw Error(ErrorCode::CacheFormat, "cache file is truncated");
  const std::size_t body = bytes.size() - 4;
  detail::ByteReader crc_reader(bytes.data() + body, 4);
  const auto stored = static_cast<std::uint32_t>(crc_reader.get_unsigned(4));
  detail::ByteReader r(bytes.data(), body);
  if (r.get_string(4) != "DZSV") throw Error(ErrorCode::CacheFormat, "not a sieve cache file (bad magic)");
  const auto version = static_cast<std::uint16_t>(r.get_unsigned(2));
  if (version != kCacheVersion) {
    throw Error(ErrorCode::CacheFormat, "cache version " + std::to_string(version) + " is not " +
                                            std::to_string(kCacheVersion) + "; delete it and re-run `dzlab sieve`");
  }
  if (detail::crc32_of(bytes.data(), body) != stored) throw Error(ErrorCode::CacheFormat, "cache CRC32 mismatch");
  const std::string spec = r.get_string(static_cast<std::size_t>(r.get_unsigned(2)));
  const auto X = static_cast<std::uint64_t>(r.get_unsigned(8));
  if (X > kSieveHardCap) throw Error(ErrorCode::CacheFormat, "cached X exceeds the hard cap");
  PrimeIdealClassList primes{X, {}};
  const auto k = static_cast<std::uint64_t>(r.get_unsigned(8));
  for (std::uint64_t i = 0; i < k; ++i) {
    PrimeIdealNorm it;
    it.p = static_cast<std::uint64_t>(r.get_unsigned(8));
    it.norm = static_cast<std::uint64_t>(r.get_unsigned(8));
    it.multiplicity = static_cast<int>(r.get_unsigned(4));
    primes.items.push_back(it);
  }
  auto read_table = [&](CoeffKind expected) {
    const auto kind = static_cast<CoeffKind>(r.get_unsigned(1));
    const int width = static_cast<int>(r.get_unsigned(1));
    if (kind != expected) throw Error(ErrorCode::CacheFormat, "unexpected table kind in cache");
    if (width == 8) {
      CoeffTable::Narrow v(X + 1, 0);
      for (std::uint64_t m = 1; m <= X; ++m) v[m] = static_cast<std::int64_t>(r.get_signed(8));
      return CoeffTable(spec, X, kind, std::move(v));
    }
    if (width == 16) {
      CoeffTable::Wide v(X + 1, 0);
      for (std::uint64_t m = 1; m <= X; ++m) v[m] = r.get_signed(16);
      return CoeffTable(spec, X, kind, std::move(v));
    }
    throw Error(ErrorCode::CacheFormat, "bad width tag " + std::to_string(width));
  };
  CoeffTable a = read_table(CoeffKind::IdealCount);
  CoeffTable phi = read_table(CoeffKind::TotientSum);
  CoeffTable mu = read_table(CoeffKind::MoebiusSum);
  if (r.position() != body) throw Error(ErrorCode::CacheFormat, "trailing bytes in cache file");
  return FieldTables{std::move(primes), std::move(a), std::move(phi), std::move(mu)};
}

inline void write_cache(const std::filesystem::path& path, const FieldTables& t) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto bytes = encode_cache(t);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Config, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Config, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline FieldTables read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::CacheFormat, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_cache(bytes);
}

/// $DZLAB_CACHE_DIR, else ./.dzlab-cache.
inline std::filesystem::path cache_dir() {
  if (const char* env = std::getenv("DZLAB_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return ".dzlab-cache";
}

inline std::filesystem::path cache_path(const std::string& field_spec, std::uint64_t X) {
  std::string name;
  for (char c : field_spec) name += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '_';
  return cache_dir() / (name + "_X" + std::to_string(X) + ".dzsv");
}

}  // namespace dzlab
