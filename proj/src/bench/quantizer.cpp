#include "ebcc/bench/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ebcc/errors.hpp"

namespace ebcc::bench {

QuantizedField uniform_quantize(const Field2D& f, double step)
{
  if (!(step > 0.0)) throw ArgumentError("uniform_quantize: step must be positive");
  QuantizedField q;
  q.step = step;
  q.reconstruction = Field2D(f.rows, f.cols);
  std::unordered_map<long long, std::size_t> counts;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto idx = std::llround(double(f.values[i]) / step);
    ++counts[idx];
    q.reconstruction.values[i] = static_cast<float>(double(idx) * step);
  }
  const double n = double(f.size());
  double h = 0.0;
  for (const auto& [idx, c] : counts) {
    const double p = double(c) / n;
    h -= p * std::log2(p);
  }
  q.entropy_bits = h;
  q.ratio = 32.0 * n / std::max(h * n, 1.0);
  return q;
}

std::optional<QuantizedField> quantize_to_ratio(const Field2D& f, double target_ratio, double tolerance)
{
  const auto [lo_it, hi_it] = std::minmax_element(f.values.begin(), f.values.end());
  const double range = std::max(double(*hi_it) - double(*lo_it), 1e-30);
  double lo = std::log(range * 1e-8), hi = std::log(range * 4.0);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    auto q = uniform_quantize(f, std::exp(mid));
    if (std::abs(q.ratio - target_ratio) <= tolerance * target_ratio) return q;
    if (q.ratio < target_ratio)
      lo = mid;
    else
      hi = mid;
  }
  return std::nullopt;
}

}  // namespace ebcc::bench
