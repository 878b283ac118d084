#include "ebcc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ebcc/errors.hpp"
#include "ebcc/grid.hpp"

namespace ebcc {

double max_abs_error(std::span<const float> original, std::span<const float> reconstructed)
{
  if (original.size() != reconstructed.size()) throw ArgumentError("error_stats: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i)
    m = std::max(m, std::abs(double(reconstructed[i]) - double(original[i])));
  return m;
}

ErrorStats error_stats(std::span<const float> original, std::span<const float> reconstructed)
{
  if (original.size() != reconstructed.size()) throw ArgumentError("error_stats: shape mismatch");
  ErrorStats s;
  if (original.empty()) return s;
  double sq = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double d = double(reconstructed[i]) - double(original[i]);
    s.max_abs = std::max(s.max_abs, std::abs(d));
    sq += d * d;
  }
  s.rmse = std::sqrt(sq / double(original.size()));
  const auto [lo, hi] = std::minmax_element(original.begin(), original.end());
  const double range = double(*hi) - double(*lo);
  s.rel_max = range > 0.0 ? s.max_abs / range : 0.0;
  return s;
}

ErrorStats error_stats(const Field2D& original, const Field2D& reconstructed)
{
  if (!original.same_shape(reconstructed)) throw ArgumentError("error_stats: shape mismatch");
  return error_stats(original.span(), reconstructed.span());
}

bool ErrorBound::satisfied_by(std::span<const float> reconstructed) const
{
  const double range = double(vmax) - double(vmin);
  return within_relative_bound(max_abs_error(original, reconstructed), range, epsilon_rel);
}

bool ErrorBound::satisfied_by_normalized(std::span<const float> normalized) const
{
  if (normalized.size() != original.size()) throw ArgumentError("error bound: shape mismatch");
  const double range = double(vmax) - double(vmin);
  double m = 0.0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const float x = denormalize_value(normalized[i], vmin, vmax);
    m = std::max(m, std::abs(double(x) - double(original[i])));
  }
  return within_relative_bound(m, range, epsilon_rel);
}

}  // namespace ebcc
