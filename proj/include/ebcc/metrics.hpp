#pragma once

#include <span>

#include "ebcc/field.hpp"

namespace ebcc {

struct ErrorStats {
  double max_abs = 0.0;
  double rel_max = 0.0;  // max_abs / (max(original) - min(original)); 0 for a constant original
  double rmse = 0.0;
};

// Throws ArgumentError if the sizes differ.
ErrorStats error_stats(std::span<const float> original, std::span<const float> reconstructed);
ErrorStats error_stats(const Field2D& original, const Field2D& reconstructed);

double max_abs_error(std::span<const float> original, std::span<const float> reconstructed);

// Range-relative max error check in original units, shared by the compressor
// and the verification code so both evaluate the bound identically.
struct ErrorBound {
  std::span<const float> original;
  float vmin = 0.0f;
  float vmax = 0.0f;
  double epsilon_rel = 0.0;

  bool satisfied_by(std::span<const float> reconstructed) const;
  // Denormalizes `normalized` with vmin/vmax before checking.
  bool satisfied_by_normalized(std::span<const float> normalized) const;
};

inline bool within_relative_bound(double max_abs, double range, double epsilon_rel)
{
  return range > 0.0 ? max_abs / range <= epsilon_rel : max_abs == 0.0;
}

}  // namespace ebcc
