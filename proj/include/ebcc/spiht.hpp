#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ebcc/dwt.hpp"

namespace ebcc {

// 'S' 'P' n_max:i8 levels:u8 rows:u32 cols:u32, little-endian.
inline constexpr std::size_t kSpihtHeaderSize = 12;
// n_max value marking an all-zero pyramid (no payload).
inline constexpr int kSpihtZeroSentinel = -128;
inline constexpr unsigned kDefaultBitPlanes = 24;
inline constexpr unsigned kDeepBitPlanes = 32;
inline constexpr std::size_t kUnlimitedBytes = std::numeric_limits<std::size_t>::max();

struct SpihtHeader {
  int n_max = kSpihtZeroSentinel;
  unsigned levels = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;

  bool all_zero() const noexcept { return n_max == kSpihtZeroSentinel; }
};

// Parses and validates the stream header. Throws FormatError.
SpihtHeader parse_spiht_header(std::span<const std::uint8_t> stream);

// SPIHT bitstream; any prefix of at least kSpihtHeaderSize bytes decodes.
struct EmbeddedStream {
  std::vector<std::uint8_t> bytes;

  std::size_t size() const noexcept { return bytes.size(); }
  SpihtHeader header() const { return parse_spiht_header(bytes); }
  std::span<const std::uint8_t> prefix(std::size_t len) const
  {
    return std::span(bytes).first(std::min(len, bytes.size()));
  }
};

// Codes coefficient magnitudes against thresholds 2^n, n = n_max, n_max-1, ...
// for at most `max_planes` bit planes, stopping early once `max_bytes` (header
// included) is reached. If `quantized` is given it receives the coefficient
// values implied by the emitted bits, which is what the decoder reproduces.
EmbeddedStream spiht_encode(const WaveletPyramid& pyramid, std::size_t max_bytes,
                            unsigned max_planes = kDefaultBitPlanes,
                            std::vector<float>* quantized = nullptr);

// Decodes the first `prefix_len` bytes (clamped to the stream length). Running
// out of bits mid-pass leaves every undetermined bit at zero. Throws FormatError
// on a bad header or a prefix shorter than the header.
WaveletPyramid spiht_decode(std::span<const std::uint8_t> stream, std::size_t prefix_len);
WaveletPyramid spiht_decode(std::span<const std::uint8_t> stream);

}  // namespace ebcc
