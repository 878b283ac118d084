#include "ebcc/bench/field_metrics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "ebcc/errors.hpp"

namespace ebcc::bench {
namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

std::array<double, kWindow> gaussian_taps()
{
  std::array<double, kWindow> w{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    w[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    sum += w[i];
  }
  for (auto& x : w) x /= sum;
  return w;
}

// Separable valid-mode filtering of a (rows x cols) array.
std::vector<double> filter_valid(const std::vector<double>& in, std::size_t rows, std::size_t cols,
                                 const std::array<double, kWindow>& w)
{
  const std::size_t oc = cols - kWindow + 1, orows = rows - kWindow + 1;
  std::vector<double> tmp(rows * oc);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < oc; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += w[k] * in[r * cols + c + k];
      tmp[r * oc + c] = s;
    }
  std::vector<double> out(orows * oc);
  for (std::size_t r = 0; r < orows; ++r)
    for (std::size_t c = 0; c < oc; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += w[k] * tmp[(r + k) * oc + c];
      out[r * oc + c] = s;
    }
  return out;
}

}  // namespace

double ssim(const Field2D& a, const Field2D& b)
{
  if (!a.same_shape(b)) throw ArgumentError("ssim: shape mismatch");
  if (a.rows < kWindow || a.cols < kWindow) throw ArgumentError("ssim: field smaller than the 11x11 window");
  if (a.values == b.values) return 1.0;
  const auto [lo, hi] = std::minmax_element(a.values.begin(), a.values.end());
  const double range = std::max(double(*hi) - double(*lo), 1e-30);
  const double c1 = (0.01 * range) * (0.01 * range);
  const double c2 = (0.03 * range) * (0.03 * range);

  const std::size_t n = a.size();
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a.values[i];
    y[i] = b.values[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto w = gaussian_taps();
  const auto mx = filter_valid(x, a.rows, a.cols, w);
  const auto my = filter_valid(y, a.rows, a.cols, w);
  const auto sxx = filter_valid(xx, a.rows, a.cols, w);
  const auto syy = filter_valid(yy, a.rows, a.cols, w);
  const auto sxy = filter_valid(xy, a.rows, a.cols, w);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cxy = sxy[i] - mx[i] * my[i];
    total += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cxy + c2)) /
             ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return total / double(mx.size());
}

std::size_t Histogram::total() const noexcept
{
  std::size_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

Histogram error_histogram(const Field2D& a, const Field2D& b, std::size_t bins)
{
  if (!a.same_shape(b)) throw ArgumentError("error_histogram: shape mismatch");
  if (bins == 0) throw ArgumentError("error_histogram: bins must be positive");
  const double e = max_abs_error(a.span(), b.span());
  Histogram h;
  h.counts.assign(bins, 0);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = -e + 2.0 * e * double(i) / double(bins);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t bin = bins / 2;
    if (e > 0.0) {
      const double d = double(b.values[i]) - double(a.values[i]);
      const auto k = static_cast<std::ptrdiff_t>(std::floor((d + e) / (2.0 * e) * double(bins)));
      bin = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, std::ptrdiff_t(bins) - 1));
    }
    ++h.counts[bin];
  }
  return h;
}

double central_mass(const Histogram& h)
{
  const std::size_t bins = h.counts.size();
  const double lo = 0.375 * double(bins), hi = 0.625 * double(bins);
  double mass = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    // Overlap of bin [i, i+1) with the central quarter, in bin units.
    const double overlap = std::max(0.0, std::min(hi, double(i + 1)) - std::max(lo, double(i)));
    mass += overlap * double(h.counts[i]);
  }
  const auto total = h.total();
  return total ? mass / double(total) : 0.0;
}

double Spectrum::total_power() const
{
  double s = 0.0;
  for (std::size_t i = 0; i < power.size(); ++i) s += power[i] * double(modes[i]);
  return s;
}

Spectrum radial_power_spectrum(const Field2D& a)
{
  if (a.rows < 2 || a.cols < 2) throw ArgumentError("radial_power_spectrum: need at least 2x2");
  const std::size_t rows = a.rows, cols = a.cols, n = a.size();
  double mean = 0.0;
  for (float v : a.values) mean += v;
  mean /= double(n);

  auto* in = fftw_alloc_complex(n);
  auto* out = fftw_alloc_complex(n);
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = double(a.values[i]) - mean;
    in[i][1] = 0.0;
  }
  fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), in, out, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const std::size_t m = std::min(rows, cols);
  const std::size_t kmax = m / 2;
  Spectrum s;
  s.wavenumber.resize(kmax);
  s.power.assign(kmax, 0.0);
  s.modes.assign(kmax, 0);
  for (std::size_t k = 0; k < kmax; ++k) s.wavenumber[k] = double(k + 1);
  const double norm = 1.0 / (double(n) * double(n));
  for (std::size_t r = 0; r < rows; ++r) {
    const double ky = double(r <= rows / 2 ? r : rows - r) * double(m) / double(rows);
    for (std::size_t c = 0; c < cols; ++c) {
      const double kx = double(c <= cols / 2 ? c : cols - c) * double(m) / double(cols);
      const double k = std::hypot(kx, ky);
      if (r == 0 && c == 0) continue;
      const auto bin = std::clamp<std::ptrdiff_t>(std::llround(k), 1, std::ptrdiff_t(kmax)) - 1;
      const auto& z = out[r * cols + c];
      s.power[bin] += (z[0] * z[0] + z[1] * z[1]) * norm;
      ++s.modes[bin];
    }
  }
  fftw_free(in);
  fftw_free(out);
  for (std::size_t k = 0; k < kmax; ++k)
    if (s.modes[k]) s.power[k] /= double(s.modes[k]);
  return s;
}

MetricReport make_report(const Field2D& original, const Field2D& reconstructed, double compression_ratio,
                         std::size_t histogram_bins)
{
  MetricReport r;
  r.error_stats = error_stats(original, reconstructed);
  r.ssim = ssim(original, reconstructed);
  r.histogram = error_histogram(original, reconstructed, histogram_bins);
  r.spectrum = radial_power_spectrum(original);
  r.reconstructed_spectrum = radial_power_spectrum(reconstructed);
  r.compression_ratio = compression_ratio;
  return r;
}

}  // namespace ebcc::bench
