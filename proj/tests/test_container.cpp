#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ebcc/byte_io.hpp"
#include "ebcc/container.hpp"
#include "ebcc/errors.hpp"
#include "test_support.hpp"

using namespace ebcc;

namespace {

struct Sample {
  GridMetadata meta;
  std::vector<CompressedChunk> chunks;
};

Sample sample(std::uint64_t seed)
{
  const Shape4 dims{1, 2, 24, 20};
  std::vector<float> data(volume(dims));
  const auto f = test::wavy_field(48, 20, seed);
  std::copy(f.values.begin(), f.values.end(), data.begin());
  data[0] = data[1] = data[2] = 5.0f;
  const GridArray grid(dims, {1, 1, 24, 20}, data);
  EbccParams p;
  p.q = seed % 2 ? 1.0 - 1e-3 : 1.0;
  return {{dims, grid.chunk_shape()}, compress_grid(grid, p)};
}

}  // namespace

TEST_CASE("empty grid serializes to a header")
{
  const GridMetadata meta{{0, 0, 0, 0}, {1, 1, 1, 1}};
  const auto bytes = serialize(meta, {});
  CHECK(bytes.size() == kFileHeaderSize);
  const auto f = deserialize(bytes);
  CHECK(f.chunks.empty());
  CHECK(f.metadata.dims == meta.dims);
}

TEST_CASE("serialization round trips bit for bit")
{
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto s = sample(seed);
    const auto bytes = serialize(s.meta, s.chunks);
    std::size_t expect = kFileHeaderSize;
    for (const auto& c : s.chunks) expect += kChunkRecordHeaderSize + c.payload_size();
    CHECK(bytes.size() == expect);
    const auto back = deserialize(bytes);
    CHECK(back.metadata.dims == s.meta.dims);
    CHECK(back.metadata.chunk_shape == s.meta.chunk_shape);
    CHECK(back.chunks == s.chunks);
    CHECK(serialize(back.metadata, back.chunks) == bytes);
  }
}

TEST_CASE("hand-built chunks of every mode round trip")
{
  CompressedChunk constant;
  constant.mode = ChunkMode::Constant;
  constant.vmin = constant.vmax = -2.5f;
  constant.rows = 3;
  constant.cols = 4;
  CompressedChunk raw;
  raw.mode = ChunkMode::Raw;
  raw.rows = 3;
  raw.cols = 4;
  raw.vmin = 0;
  raw.vmax = 11;
  for (int i = 0; i < 12; ++i) put_le(raw.payload, float(i));
  raw.base_len = 48;
  const std::vector<CompressedChunk> chunks{constant, raw};
  const GridMetadata meta{{1, 2, 3, 4}, {1, 1, 3, 4}};
  const auto back = deserialize(serialize(meta, chunks));
  CHECK(back.chunks == chunks);
  CHECK(decompress_chunk(back.chunks[1]).values[11] == 11.0f);
}

TEST_CASE("every truncation is rejected with FormatError")
{
  const auto s = sample(1);
  const auto bytes = serialize(s.meta, s.chunks);
  for (std::size_t len = 0; len < bytes.size(); ++len) {
    const std::span<const std::uint8_t> cut(bytes.data(), len);
    CHECK_THROWS_AS(deserialize(cut), FormatError);
  }
  auto longer = bytes;
  longer.push_back(0);
  CHECK_THROWS_AS(deserialize(longer), FormatError);
}

TEST_CASE("random byte corruption never crashes")
{
  const auto s = sample(2);
  const auto bytes = serialize(s.meta, s.chunks);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pos(0, bytes.size() - 1);
  int rejected = 0;
  for (int k = 0; k < 300; ++k) {
    auto b = bytes;
    b[pos(rng)] ^= static_cast<std::uint8_t>(1u << (k % 8));
    try {
      const auto f = deserialize(b);
      (void)decompress_grid(f.metadata.dims, f.metadata.chunk_shape, f.chunks);
    } catch (const FormatError&) {
      ++rejected;
    } catch (const ArgumentError&) {
      ++rejected;
    }
  }
  CHECK(rejected > 0);
}

TEST_CASE("magic and version checks")
{
  const auto s = sample(3);
  auto bytes = serialize(s.meta, s.chunks);
  CHECK(bytes[4] == kFormatMinor);
  CHECK(bytes[5] == kFormatMajor);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(deserialize(bad), FormatError);

  bad = bytes;
  bad[5] = kFormatMajor + 1;
  try {
    deserialize(bad);
    FAIL("expected UnsupportedVersion");
  } catch (const UnsupportedVersion& e) {
    CHECK(e.version() == ((kFormatMajor + 1u) << 8));
    CHECK(e.offset() == 4);
  }

  bad = bytes;
  bad[4] = kFormatMinor + 1;
  CHECK(deserialize(bad).chunks == s.chunks);

  bad = bytes;
  bad[kFileHeaderSize] = 9;  // first chunk mode
  CHECK_THROWS_AS(deserialize(bad), FormatError);
}

TEST_CASE("stream and file helpers")
{
  const auto s = sample(4);
  std::stringstream ss;
  const auto n = write_file(s.chunks, s.meta, ss);
  CHECK(n == serialize(s.meta, s.chunks).size());
  CHECK(read_file(ss).chunks == s.chunks);

  const auto dir = std::filesystem::temp_directory_path() / "ebcc_container_test";
  std::filesystem::create_directories(dir);
  write_file(s.chunks, s.meta, dir / "x.ebcc");
  CHECK(read_file(dir / "x.ebcc").chunks == s.chunks);
  CHECK_THROWS_AS(read_file(dir / "missing.ebcc"), IoError);

  const std::vector<float> v{1.5f, -2.0f, 3.25f};
  write_raw_floats(v, dir / "v.f32");
  CHECK(read_raw_floats(dir / "v.f32") == v);
  std::filesystem::remove_all(dir);
}
