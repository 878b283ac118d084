#include "ebcc/dwt.hpp"

#include <algorithm>
#include <bit>

#include "ebcc/errors.hpp"

namespace ebcc {
namespace {

// JPEG2000 irreversible lifting coefficients.
constexpr double kAlpha = -1.586134342059924;
constexpr double kBeta = -0.052980118572961;
constexpr double kGamma = 0.882911075530934;
constexpr double kDelta = 0.443506852043971;
// sqrt(2) / 1.230174104914001: low band DC gain sqrt(2), near-orthonormal.
constexpr double kScale = 1.149604398860241;

// Whole-sample symmetric extension: x[-1] = x[1], x[n] = x[n-2].
inline void lift(std::vector<double>& x, std::size_t first, double a)
{
  const std::size_t n = x.size();
  for (std::size_t i = first; i < n; i += 2) {
    const double left = i == 0 ? x[1] : x[i - 1];
    const double right = i + 1 < n ? x[i + 1] : x[i - 1];
    x[i] += a * (left + right);
  }
}

}  // namespace

void cdf97_forward_1d(std::vector<double>& x)
{
  const std::size_t n = x.size();
  if (n < 2) return;
  lift(x, 1, kAlpha);
  lift(x, 0, kBeta);
  lift(x, 1, kGamma);
  lift(x, 0, kDelta);
  const std::size_t nlow = (n + 1) / 2;
  std::vector<double> tmp(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0)
      tmp[i / 2] = x[i] * kScale;
    else
      tmp[nlow + i / 2] = x[i] / kScale;
  }
  x.swap(tmp);
}

void cdf97_inverse_1d(std::vector<double>& x)
{
  const std::size_t n = x.size();
  if (n < 2) return;
  const std::size_t nlow = (n + 1) / 2;
  std::vector<double> tmp(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0)
      tmp[i] = x[i / 2] / kScale;
    else
      tmp[i] = x[nlow + i / 2] * kScale;
  }
  x.swap(tmp);
  lift(x, 0, -kDelta);
  lift(x, 1, -kGamma);
  lift(x, 0, -kBeta);
  lift(x, 1, -kAlpha);
}

unsigned SubbandGeometry::max_levels(std::size_t rows, std::size_t cols) noexcept
{
  unsigned l = 0;
  while (rows >= 2 && cols >= 2) {
    rows = (rows + 1) / 2;
    cols = (cols + 1) / 2;
    ++l;
  }
  return l;
}

SubbandGeometry::SubbandGeometry(std::size_t rows, std::size_t cols, unsigned levels)
    : levels_(levels), rows_{rows}, cols_{cols}
{
  if (levels > max_levels(rows, cols)) throw ArgumentError("too many decomposition levels for shape");
  for (unsigned l = 1; l <= levels; ++l) {
    rows_.push_back((rows_.back() + 1) / 2);
    cols_.push_back((cols_.back() + 1) / 2);
  }
}

bool SubbandGeometry::has_offspring(std::size_t r, std::size_t c) const noexcept
{
  // Finest-level detail coefficients are leaves.
  if (levels_ == 0 || r >= rows_[1] || c >= cols_[1]) return false;
  return offspring(r, c).count > 0;
}

SubbandGeometry::Offspring SubbandGeometry::offspring(std::size_t r, std::size_t c) const noexcept
{
  Offspring out;
  if (levels_ == 0) return out;
  const unsigned top = levels_;
  auto push = [&](std::size_t rr, std::size_t cc) {
    out.index[out.count++] = static_cast<std::uint32_t>(rr * cols_[0] + cc);
  };

  if (r < rows_[top] && c < cols_[top]) {
    // LL root: one child in each detail band of the coarsest level.
    const bool hl = c < cols_[top - 1] - cols_[top];
    const bool lh = r < rows_[top - 1] - rows_[top];
    if (hl) push(r, cols_[top] + c);
    if (lh) push(rows_[top] + r, c);
    if (hl && lh) push(rows_[top] + r, cols_[top] + c);
    return out;
  }

  // Find the level l whose detail bands contain (r, c).
  unsigned l = 1;
  while (l < top && r < rows_[l] && c < cols_[l]) ++l;
  if (l == 1) return out;

  // Local coordinates inside the band and band offsets at levels l and l-1.
  const bool row_high = r >= rows_[l];
  const bool col_high = c >= cols_[l];
  const std::size_t i = row_high ? r - rows_[l] : r;
  const std::size_t k = col_high ? c - cols_[l] : c;
  const std::size_t parent_rows = row_high ? rows_[l - 1] - rows_[l] : rows_[l];
  const std::size_t parent_cols = col_high ? cols_[l - 1] - cols_[l] : cols_[l];
  const std::size_t child_rows = row_high ? rows_[l - 2] - rows_[l - 1] : rows_[l - 1];
  const std::size_t child_cols = col_high ? cols_[l - 2] - cols_[l - 1] : cols_[l - 1];
  const std::size_t row_off = row_high ? rows_[l - 1] : 0;
  const std::size_t col_off = col_high ? cols_[l - 1] : 0;

  // Two children per dimension; the last parent also takes any odd tail.
  auto span_of = [](std::size_t idx, std::size_t parents, std::size_t children) {
    const std::size_t begin = std::min(2 * idx, children);
    const std::size_t end = idx + 1 == parents ? children : std::min(2 * idx + 2, children);
    return std::pair{begin, end};
  };
  const auto [r0, r1] = span_of(i, parent_rows, child_rows);
  const auto [c0, c1] = span_of(k, parent_cols, child_cols);
  for (std::size_t rr = r0; rr < r1; ++rr)
    for (std::size_t cc = c0; cc < c1; ++cc) push(row_off + rr, col_off + cc);
  return out;
}

unsigned default_levels(std::size_t rows, std::size_t cols) noexcept
{
  const std::size_t m = std::min(rows, cols);
  if (m < 2) return 1;
  const int lg = static_cast<int>(std::bit_width(m)) - 1;
  return static_cast<unsigned>(std::clamp(lg - 2, 1, 5));
}

namespace {

void transform_region(Field2D& f, std::size_t rows, std::size_t cols, bool forward)
{
  std::vector<double> line;
  auto do_rows = [&] {
    line.resize(cols);
    for (std::size_t r = 0; r < rows; ++r) {
      float* p = f.values.data() + r * f.cols;
      std::copy(p, p + cols, line.begin());
      forward ? cdf97_forward_1d(line) : cdf97_inverse_1d(line);
      for (std::size_t c = 0; c < cols; ++c) p[c] = static_cast<float>(line[c]);
    }
  };
  auto do_cols = [&] {
    line.resize(rows);
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t r = 0; r < rows; ++r) line[r] = f(r, c);
      forward ? cdf97_forward_1d(line) : cdf97_inverse_1d(line);
      for (std::size_t r = 0; r < rows; ++r) f(r, c) = static_cast<float>(line[r]);
    }
  };
  if (forward) {
    do_rows();
    do_cols();
  } else {
    do_cols();
    do_rows();
  }
}

}  // namespace

WaveletPyramid forward_dwt(const Field2D& values, unsigned levels)
{
  if (levels < 1) throw ArgumentError("forward_dwt: levels must be >= 1");
  if (values.size() != values.rows * values.cols) throw ArgumentError("forward_dwt: bad field shape");
  levels = std::min(levels, SubbandGeometry::max_levels(values.rows, values.cols));
  WaveletPyramid p{values, SubbandGeometry(values.rows, values.cols, levels)};
  for (unsigned l = 0; l < levels; ++l)
    transform_region(p.coeffs, p.geometry.rows(l), p.geometry.cols(l), true);
  return p;
}

WaveletPyramid forward_dwt(const Field2D& values)
{
  return forward_dwt(values, default_levels(values.rows, values.cols));
}

Field2D inverse_dwt(const WaveletPyramid& pyramid)
{
  const auto& g = pyramid.geometry;
  const auto& c = pyramid.coeffs;
  if (c.values.size() != c.rows * c.cols || g.rows() != c.rows || g.cols() != c.cols ||
      g.levels() > SubbandGeometry::max_levels(c.rows, c.cols))
    throw FormatError("inverse_dwt: geometry does not match coefficient array", 0);
  Field2D out = c;
  for (unsigned l = g.levels(); l-- > 0;) transform_region(out, g.rows(l), g.cols(l), false);
  return out;
}

}  // namespace ebcc
