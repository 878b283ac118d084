#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ebcc/field.hpp"

namespace ebcc {

// Extents of the successive LL regions of a Mallat-layout pyramid.
// rows(0) x cols(0) is the full array; rows(l) = ceil(rows(l-1) / 2).
class SubbandGeometry {
 public:
  SubbandGeometry() = default;
  // `levels` must not exceed max_levels(rows, cols); throws ArgumentError otherwise.
  SubbandGeometry(std::size_t rows, std::size_t cols, unsigned levels);

  // Deepest decomposition that keeps every transformed LL region at least 2x2.
  static unsigned max_levels(std::size_t rows, std::size_t cols) noexcept;

  unsigned levels() const noexcept { return levels_; }
  std::size_t rows(unsigned level = 0) const noexcept { return rows_[level]; }
  std::size_t cols(unsigned level = 0) const noexcept { return cols_[level]; }
  std::size_t size() const noexcept { return rows_[0] * cols_[0]; }

  // Number of coefficients in the top LL band (the tree roots).
  std::size_t root_count() const noexcept { return rows_[levels_] * cols_[levels_]; }

  // Offspring of coefficient (r, c): at most 3 for an LL root, at most 3x3 for
  // detail coefficients whose band absorbs an odd-length tail.
  struct Offspring {
    std::array<std::uint32_t, 9> index{};
    unsigned count = 0;
  };
  Offspring offspring(std::size_t r, std::size_t c) const noexcept;
  bool has_offspring(std::size_t r, std::size_t c) const noexcept;

 private:
  unsigned levels_ = 0;
  std::vector<std::size_t> rows_{0};
  std::vector<std::size_t> cols_{0};
};

struct WaveletPyramid {
  Field2D coeffs;  // Mallat layout, same shape as the input
  SubbandGeometry geometry;

  std::size_t rows() const noexcept { return coeffs.rows; }
  std::size_t cols() const noexcept { return coeffs.cols; }
  unsigned levels() const noexcept { return geometry.levels(); }
};

// min(5, floor(log2(min(rows, cols))) - 2), at least 1.
unsigned default_levels(std::size_t rows, std::size_t cols) noexcept;

// CDF 9/7 lifting with symmetric extension. The requested depth is clamped to
// SubbandGeometry::max_levels; throws ArgumentError if levels < 1.
WaveletPyramid forward_dwt(const Field2D& values, unsigned levels);
WaveletPyramid forward_dwt(const Field2D& values);

// Throws FormatError if the geometry does not match the coefficient array.
Field2D inverse_dwt(const WaveletPyramid& pyramid);

// 1D lifting steps on a contiguous line; exposed for tests.
void cdf97_forward_1d(std::vector<double>& line);
void cdf97_inverse_1d(std::vector<double>& line);

}  // namespace ebcc
