#include "ebcc/bench/divergence.hpp"

#include "ebcc/errors.hpp"

namespace ebcc::bench {
namespace {

// Derivative of samples f(0..n-1) with spacing h at index i.
template <typename Sample>
double derivative(Sample f, std::size_t n, std::size_t i, double h)
{
  if (n == 2) return (f(1) - f(0)) / h;
  if (i == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  if (i == n - 1) return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
  return (f(i + 1) - f(i - 1)) / (2.0 * h);
}

}  // namespace

Field2D horizontal_divergence(const Field2D& u, const Field2D& v, double dx, double dy)
{
  if (!u.same_shape(v)) throw ArgumentError("horizontal_divergence: shape mismatch");
  if (u.rows < 2 || u.cols < 2) throw ArgumentError("horizontal_divergence: need at least 2x2");
  if (!(dx > 0.0) || !(dy > 0.0)) throw ArgumentError("horizontal_divergence: spacing must be positive");
  Field2D out(u.rows, u.cols);
  for (std::size_t r = 0; r < u.rows; ++r)
    for (std::size_t c = 0; c < u.cols; ++c) {
      const double dudx = derivative([&](std::size_t k) { return double(u(r, k)); }, u.cols, c, dx);
      const double dvdy = derivative([&](std::size_t k) { return double(v(k, c)); }, u.rows, r, dy);
      out(r, c) = static_cast<float>(dudx + dvdy);
    }
  return out;
}

}  // namespace ebcc::bench
