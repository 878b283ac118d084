#pragma once

#include <cstdint>
#include <cmath>
#include <random>

#include "ebcc/field.hpp"

namespace ebcc::test {

inline Field2D random_field(std::size_t rows, std::size_t cols, std::uint64_t seed, float lo = -1.0f, float hi = 1.0f)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> d(lo, hi);
  Field2D f(rows, cols);
  for (auto& v : f.values) v = d(rng);
  return f;
}

// Smooth field with a little noise, typical of geophysical chunks.
inline Field2D wavy_field(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ph(0.0, 6.283185307179586);
  std::normal_distribution<double> noise(0.0, 0.01);
  const double a = ph(rng), b = ph(rng);
  Field2D f(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      f(r, c) = static_cast<float>(250.0 + 20.0 * std::sin(0.07 * double(r) + a) * std::cos(0.05 * double(c) + b) +
                                   noise(rng));
  return f;
}

}  // namespace ebcc::test
