#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "dzlab/cache.hpp"
#include "test_util.hpp"

using namespace dzlab;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dzlab_cache_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<unsigned char> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::filesystem::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST(Cache, FileRoundTripIsExact) {
  for (const char* spec : {"quad:-1", "poly:1,0,0,-2", "rational"}) {
    const FieldTables t = build_tables(parse_field_spec(spec), 5000);
    const auto path = scratch(std::string("rt_") + std::to_string(std::hash<std::string>{}(spec)) + ".dzsv");
    write_cache(path, t);
    const FieldTables back = read_cache(path);
    EXPECT_EQ(back.ideal_count, t.ideal_count) << spec;
    EXPECT_EQ(back.totient_sum, t.totient_sum) << spec;
    EXPECT_EQ(back.moebius_sum, t.moebius_sum) << spec;
    EXPECT_EQ(back.primes.items, t.primes.items) << spec;
    EXPECT_EQ(encode_cache(back), slurp(path)) << spec;
  }
}

TEST(Cache, HeaderLayout) {
  const auto bytes = encode_cache(build_tables(make_quadratic(-1), 10));
  ASSERT_GT(bytes.size(), 16u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "DZSV");
  EXPECT_EQ(bytes[4] | (bytes[5] << 8), kCacheVersion);
  EXPECT_EQ(bytes[6] | (bytes[7] << 8), 7);  // "quad:-1"
  EXPECT_EQ(std::string(bytes.begin() + 8, bytes.begin() + 15), "quad:-1");
  EXPECT_EQ(bytes[15], 10);
}

TEST(Cache, CorruptionDetected) {
  auto bytes = encode_cache(build_tables(make_quadratic(-1), 1000));
  bytes[bytes.size() / 2] ^= 0x40;
  EXPECT_DZ_ERROR(decode_cache(bytes), ErrorCode::CacheFormat);
}

TEST(Cache, VersionMismatchRefused) {
  auto bytes = encode_cache(build_tables(make_quadratic(-1), 100));
  bytes[4] = static_cast<unsigned char>(kCacheVersion + 1);
  const auto path = scratch("version.dzsv");
  dump(path, bytes);
  try {
    read_cache(path);
    FAIL() << "expected CacheFormat";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CacheFormat);
    EXPECT_NE(std::string(e.what()).find("dzlab sieve"), std::string::npos);
  }
}

TEST(Cache, TruncationAndBadMagic) {
  auto bytes = encode_cache(build_tables(make_rational(), 100));
  EXPECT_DZ_ERROR(decode_cache({bytes.begin(), bytes.begin() + 5}), ErrorCode::CacheFormat);
  bytes[0] = 'X';
  EXPECT_DZ_ERROR(decode_cache(bytes), ErrorCode::CacheFormat);
  EXPECT_DZ_ERROR(read_cache(scratch("missing.dzsv")), ErrorCode::CacheFormat);
}

TEST(Cache, EnvironmentOverridesDirectory) {
  ::setenv("DZLAB_CACHE_DIR", "/tmp/somewhere", 1);
  EXPECT_EQ(cache_path("poly:1,0,0,-2", 1000000), std::filesystem::path("/tmp/somewhere/poly_1_0_0_-2_X1000000.dzsv"));
  ::unsetenv("DZLAB_CACHE_DIR");
  EXPECT_EQ(cache_dir(), std::filesystem::path(".dzlab-cache"));
}
