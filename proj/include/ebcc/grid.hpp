#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ebcc/field.hpp"

namespace ebcc {

// (time, level, lat, lon) extents or indices.
using Shape4 = std::array<std::size_t, 4>;

std::size_t volume(const Shape4& s) noexcept;

// Dense 4D float array tiled into chunks. All elements are finite.
class GridArray {
 public:
  GridArray() = default;
  // Throws IngestError on a non-finite element and ArgumentError on a size
  // mismatch. A zero chunk extent is replaced by the full extent.
  GridArray(Shape4 dims, Shape4 chunk_shape, std::vector<float> data);

  const Shape4& dims() const noexcept { return dims_; }
  const Shape4& chunk_shape() const noexcept { return chunk_; }
  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  std::size_t offset(const Shape4& idx) const noexcept;

  // Chunk origins in row-major tile order; edge chunks may be smaller.
  std::vector<Shape4> chunk_origins() const;
  Shape4 chunk_extent(const Shape4& origin) const noexcept;
  std::size_t chunk_count() const noexcept;

 private:
  Shape4 dims_{0, 0, 0, 0};
  Shape4 chunk_{0, 0, 0, 0};
  std::vector<float> data_;
};

// Pads a 1..4 element shape on the left with ones.
Shape4 to_shape4(std::span<const std::size_t> extents);

struct Chunk {
  Field2D values;
  float vmin = 0.0f;
  float vmax = 0.0f;
  Shape4 origin{0, 0, 0, 0};
  Shape4 extent{0, 0, 0, 0};
  bool normalized = false;
  bool constant = false;
};

// Flattens the (T,P,H,W) block at `origin` into a (T*P*H, W) chunk.
Chunk flatten_chunk(const GridArray& grid, const Shape4& origin, const Shape4& extent);

// Flattens a standalone row-major block. Throws IngestError on non-finite values.
Chunk flatten_block(std::span<const float> block, const Shape4& shape);

// Writes a (T*P*H, W) field back into the block at `origin`.
void unflatten_chunk(const Field2D& field, const Shape4& origin, const Shape4& extent, GridArray& grid);

// Ranges below this are treated as constant.
inline constexpr double kMinRange = 1e-30;

// Maps values onto [0, 1] using the chunk min/max; constant chunks become all zero.
Chunk normalize(Chunk chunk);

float denormalize_value(float v, float vmin, float vmax) noexcept;
Field2D denormalize(const Field2D& normalized, float vmin, float vmax);

}  // namespace ebcc
