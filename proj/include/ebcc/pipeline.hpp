#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ebcc/base_codec.hpp"
#include "ebcc/errors.hpp"
#include "ebcc/grid.hpp"
#include "ebcc/metrics.hpp"
#include "ebcc/spiht.hpp"

namespace ebcc {

struct EbccParams {
  double epsilon_rel = 0.01;  // range-relative max error target
  double q = 1.0 - 1e-5;      // target fraction of base-layer errors within epsilon
  double r0 = 10.0;           // initial base compression ratio
  double search_tol = 1e-3;   // ratio bisection tolerance
  unsigned base_planes = kDefaultBitPlanes;
  unsigned residual_planes = kDefaultBitPlanes;
  unsigned deep_residual_planes = kDeepBitPlanes;

  // Throws ArgumentError on out-of-range values.
  void validate() const;
};

enum class ChunkMode : std::uint8_t {
  Constant = 0,
  PureBase = 1,
  TwoLayer = 2,
  // Verbatim floats; only emitted when no coded payload meets the bound or is smaller.
  Raw = 3,
};

const char* to_string(ChunkMode m) noexcept;

struct CompressedChunk {
  ChunkMode mode = ChunkMode::Constant;
  float epsilon_rel = 0.0f;
  float q = 0.0f;
  float vmin = 0.0f;
  float vmax = 0.0f;
  std::uint32_t base_len = 0;
  std::uint32_t residual_len = 0;
  std::vector<std::uint8_t> payload;  // base bytes followed by residual bytes
  // Flattened chunk shape; implied by the container tiling, not serialized.
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t payload_size() const noexcept { return payload.size(); }
  std::span<const std::uint8_t> base() const noexcept { return std::span(payload).first(base_len); }
  std::span<const std::uint8_t> residual() const noexcept
  {
    return std::span(payload).subspan(base_len, residual_len);
  }
  friend bool operator==(const CompressedChunk&, const CompressedChunk&) = default;
};

struct RatioSearch {
  BaseEncoding encoding;
  double ratio = 1.0;
  bool q_unreachable = false;  // q not met even at ratio 1
  int evaluations = 0;
};

// Bracket-and-bisect search for the highest base ratio whose q_achieved >= q.
RatioSearch search_base_ratio(BaseSession& session, double q, double r0, double tol);
RatioSearch search_base_ratio(const Chunk& normalized, const EbccParams& params);

// Smallest residual payload length t (bytes after the SPIHT header) such that
// base_field + IDWT(decode(prefix)) satisfies `bound`, with t - 1 infeasible.
// Throws ResidualInsufficient if even the full stream is infeasible.
std::size_t search_truncation(const EmbeddedStream& residual, const Field2D& base_field, const ErrorBound& bound);

// base + IDWT(residual prefix), element-wise in float.
Field2D combine_layers(const Field2D& base_field, std::span<const std::uint8_t> residual_prefix);

struct CompressionTrace {
  CompressedChunk chunk;
  std::optional<std::size_t> two_layer_size;  // empty if the two-layer path was skipped or failed
  std::optional<std::size_t> pure_base_size;  // empty if pure base never met the bound
  double base_ratio = 0.0;                    // two-layer base ratio
  double pure_base_ratio = 0.0;
  std::size_t truncation = 0;
  bool deep_residual = false;
};

// `chunk` holds original (not normalized) values.
CompressionTrace compress_chunk_traced(const Chunk& chunk, const EbccParams& params);
CompressedChunk compress_chunk(const Chunk& chunk, const EbccParams& params);

// Throws FormatError on a malformed payload.
Field2D decompress_chunk(const CompressedChunk& cc);

// Attaches the chunk origin to a failure inside compress_grid.
class ChunkError : public Error {
 public:
  ChunkError(const std::string& what, Shape4 origin) : Error(what), origin_(origin) {}
  const Shape4& origin() const noexcept { return origin_; }

 private:
  Shape4 origin_;
};

// Chunks in row-major tile order; `threads` > 1 compresses chunks concurrently.
std::vector<CompressedChunk> compress_grid(const GridArray& grid, const EbccParams& params, unsigned threads = 1);
GridArray decompress_grid(const Shape4& dims, const Shape4& chunk_shape, std::span<const CompressedChunk> chunks);

}  // namespace ebcc
