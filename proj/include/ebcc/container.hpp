#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ebcc/grid.hpp"
#include "ebcc/pipeline.hpp"

namespace ebcc {

// File layout, all integers little-endian:
//   "EBCC" | version:u16 (major << 8 | minor) | dims:4xu32 | chunk_shape:4xu32 | chunk_count:u32
//   then per chunk: mode:u8 | epsilon_rel:f32 | q:f32 | vmin:f32 | vmax:f32 |
//                   base_len:u32 | residual_len:u32 | payload[base_len + residual_len]
inline constexpr std::uint16_t kFormatMajor = 1;
inline constexpr std::uint16_t kFormatMinor = 0;
inline constexpr std::uint16_t kFormatVersion = (kFormatMajor << 8) | kFormatMinor;
inline constexpr std::size_t kFileHeaderSize = 4 + 2 + 16 + 16 + 4;
inline constexpr std::size_t kChunkRecordHeaderSize = 1 + 4 * 4 + 4 + 4;

struct GridMetadata {
  Shape4 dims{0, 0, 0, 0};
  Shape4 chunk_shape{1, 1, 1, 1};
};

struct EbccFile {
  GridMetadata metadata;
  std::vector<CompressedChunk> chunks;
};

std::vector<std::uint8_t> serialize(const GridMetadata& meta, std::span<const CompressedChunk> chunks);
// Throws FormatError (or UnsupportedVersion) with the failing byte offset.
EbccFile deserialize(std::span<const std::uint8_t> bytes);

// Returns the number of bytes written; throws IoError on stream failure.
std::size_t write_file(std::span<const CompressedChunk> chunks, const GridMetadata& meta, std::ostream& sink);
EbccFile read_file(std::istream& source);

void write_file(std::span<const CompressedChunk> chunks, const GridMetadata& meta, const std::filesystem::path& path);
EbccFile read_file(const std::filesystem::path& path);

// Raw little-endian float32 files.
std::vector<float> read_raw_floats(const std::filesystem::path& path);
void write_raw_floats(std::span<const float> values, const std::filesystem::path& path);

}  // namespace ebcc
