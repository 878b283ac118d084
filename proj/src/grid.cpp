#include "ebcc/grid.hpp"

#include <algorithm>
#include <cmath>

#include "ebcc/errors.hpp"

namespace ebcc {

std::size_t volume(const Shape4& s) noexcept { return s[0] * s[1] * s[2] * s[3]; }

Shape4 to_shape4(std::span<const std::size_t> extents)
{
  if (extents.empty() || extents.size() > 4)
    throw ArgumentError("shape must have 1 to 4 extents");
  Shape4 out{1, 1, 1, 1};
  std::copy(extents.begin(), extents.end(), out.begin() + (4 - extents.size()));
  return out;
}

GridArray::GridArray(Shape4 dims, Shape4 chunk_shape, std::vector<float> data)
    : dims_(dims), chunk_(chunk_shape), data_(std::move(data))
{
  if (volume(dims_) != data_.size())
    throw ArgumentError("grid dims do not match data length");
  for (std::size_t i = 0; i < 4; ++i) {
    if (chunk_[i] == 0 || chunk_[i] > dims_[i]) chunk_[i] = std::max<std::size_t>(dims_[i], 1);
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) throw IngestError("non-finite input value", i);
  }
}

std::size_t GridArray::offset(const Shape4& idx) const noexcept
{
  return ((idx[0] * dims_[1] + idx[1]) * dims_[2] + idx[2]) * dims_[3] + idx[3];
}

std::size_t GridArray::chunk_count() const noexcept
{
  if (volume(dims_) == 0) return 0;
  std::size_t n = 1;
  for (std::size_t i = 0; i < 4; ++i) n *= (dims_[i] + chunk_[i] - 1) / chunk_[i];
  return n;
}

std::vector<Shape4> GridArray::chunk_origins() const
{
  std::vector<Shape4> out;
  if (volume(dims_) == 0) return out;
  out.reserve(chunk_count());
  Shape4 o{0, 0, 0, 0};
  for (o[0] = 0; o[0] < dims_[0]; o[0] += chunk_[0])
    for (o[1] = 0; o[1] < dims_[1]; o[1] += chunk_[1])
      for (o[2] = 0; o[2] < dims_[2]; o[2] += chunk_[2])
        for (o[3] = 0; o[3] < dims_[3]; o[3] += chunk_[3]) out.push_back(o);
  return out;
}

Shape4 GridArray::chunk_extent(const Shape4& origin) const noexcept
{
  Shape4 e;
  for (std::size_t i = 0; i < 4; ++i) e[i] = std::min(chunk_[i], dims_[i] - origin[i]);
  return e;
}

Chunk flatten_chunk(const GridArray& grid, const Shape4& origin, const Shape4& extent)
{
  const auto& dims = grid.dims();
  for (std::size_t i = 0; i < 4; ++i) {
    if (extent[i] == 0 || origin[i] + extent[i] > dims[i])
      throw ArgumentError("chunk block outside grid");
  }
  Chunk chunk;
  chunk.origin = origin;
  chunk.extent = extent;
  chunk.values = Field2D(extent[0] * extent[1] * extent[2], extent[3]);
  auto src = grid.data();
  auto* dst = chunk.values.values.data();
  for (std::size_t t = 0; t < extent[0]; ++t)
    for (std::size_t p = 0; p < extent[1]; ++p)
      for (std::size_t h = 0; h < extent[2]; ++h) {
        const auto base = grid.offset({origin[0] + t, origin[1] + p, origin[2] + h, origin[3]});
        for (std::size_t w = 0; w < extent[3]; ++w) {
          const float v = src[base + w];
          if (!std::isfinite(v)) throw IngestError("non-finite input value", base + w);
          *dst++ = v;
        }
      }
  return chunk;
}

Chunk flatten_block(std::span<const float> block, const Shape4& shape)
{
  if (volume(shape) != block.size()) throw ArgumentError("block shape does not match data length");
  if (block.empty()) throw ArgumentError("empty block");
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (!std::isfinite(block[i])) throw IngestError("non-finite input value", i);
  }
  Chunk chunk;
  chunk.extent = shape;
  chunk.values = Field2D(shape[0] * shape[1] * shape[2], shape[3],
                         std::vector<float>(block.begin(), block.end()));
  return chunk;
}

void unflatten_chunk(const Field2D& field, const Shape4& origin, const Shape4& extent, GridArray& grid)
{
  if (field.rows != extent[0] * extent[1] * extent[2] || field.cols != extent[3])
    throw ArgumentError("field shape does not match chunk extent");
  auto dst = grid.data();
  const auto* src = field.values.data();
  for (std::size_t t = 0; t < extent[0]; ++t)
    for (std::size_t p = 0; p < extent[1]; ++p)
      for (std::size_t h = 0; h < extent[2]; ++h) {
        const auto base = grid.offset({origin[0] + t, origin[1] + p, origin[2] + h, origin[3]});
        std::copy_n(src, extent[3], dst.begin() + static_cast<std::ptrdiff_t>(base));
        src += extent[3];
      }
}

Chunk normalize(Chunk chunk)
{
  auto& v = chunk.values.values;
  if (v.empty()) throw ArgumentError("cannot normalize an empty chunk");
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  chunk.vmin = *lo;
  chunk.vmax = *hi;
  chunk.normalized = true;
  const double range = double(chunk.vmax) - double(chunk.vmin);
  if (range < kMinRange) {
    chunk.constant = true;
    chunk.vmax = chunk.vmin;
    std::fill(v.begin(), v.end(), 0.0f);
    return chunk;
  }
  const double lo_d = chunk.vmin;
  for (auto& x : v) x = static_cast<float>(std::clamp((double(x) - lo_d) / range, 0.0, 1.0));
  return chunk;
}

float denormalize_value(float v, float vmin, float vmax) noexcept
{
  return static_cast<float>(double(vmin) + double(v) * (double(vmax) - double(vmin)));
}

Field2D denormalize(const Field2D& normalized, float vmin, float vmax)
{
  Field2D out(normalized.rows, normalized.cols);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.values[i] = denormalize_value(normalized.values[i], vmin, vmax);
  return out;
}

}  // namespace ebcc
