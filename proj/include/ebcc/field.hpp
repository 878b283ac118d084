#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ebcc {

// Dense row-major 2D float array.
struct Field2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;

  Field2D() = default;
  Field2D(std::size_t r, std::size_t c, float fill = 0.0f) : rows(r), cols(c), values(r * c, fill) {}
  Field2D(std::size_t r, std::size_t c, std::vector<float> v) : rows(r), cols(c), values(std::move(v)) {}

  std::size_t size() const noexcept { return values.size(); }
  float& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  float operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const float> span() const noexcept { return values; }
  std::span<float> span() noexcept { return values; }

  bool same_shape(const Field2D& o) const noexcept { return rows == o.rows && cols == o.cols; }
  friend bool operator==(const Field2D&, const Field2D&) = default;
};

}  // namespace ebcc
