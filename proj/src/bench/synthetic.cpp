#include "ebcc/bench/synthetic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ebcc/errors.hpp"

namespace ebcc::bench {

const char* to_string(FieldKind k) noexcept
{
  switch (k) {
    case FieldKind::SmoothFourier: return "smooth-fourier";
    case FieldKind::Vortex: return "vortex";
    case FieldKind::Spiky: return "spiky";
  }
  return "unknown";
}

FieldKind parse_field_kind(std::string_view name)
{
  if (name == "smooth-fourier") return FieldKind::SmoothFourier;
  if (name == "vortex") return FieldKind::Vortex;
  if (name == "spiky") return FieldKind::Spiky;
  throw ArgumentError("unknown field kind: " + std::string(name));
}

namespace {

void standardize(std::vector<double>& v)
{
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / double(v.size()));
  for (double& x : v) x = sd > 0.0 ? (x - mean) / sd : 0.0;
}

std::vector<double> power_law_values(std::size_t rows, std::size_t cols, double slope, std::uint64_t seed)
{
  const std::size_t half = cols / 2 + 1;
  auto* spec = fftw_alloc_complex(rows * half);
  std::vector<double> out(rows * cols);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double m = double(std::min(rows, cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const double ky = double(r <= rows / 2 ? r : rows - r) * m / double(rows);
    for (std::size_t c = 0; c < half; ++c) {
      const double kx = double(c) * m / double(cols);
      const double k = std::hypot(kx, ky);
      const double amp = k > 0.0 ? std::pow(k, -slope / 2.0) : 0.0;
      const double re = gauss(rng), im = gauss(rng);
      spec[r * half + c][0] = amp * re;
      spec[r * half + c][1] = amp * im;
    }
  }
  fftw_plan plan = fftw_plan_dft_c2r_2d(static_cast<int>(rows), static_cast<int>(cols), spec, out.data(),
                                        FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  fftw_free(spec);
  standardize(out);
  return out;
}

}  // namespace

Field2D power_law_field(std::size_t rows, std::size_t cols, double slope, std::uint64_t seed)
{
  if (rows < 2 || cols < 2) throw ArgumentError("power_law_field: need at least 2x2");
  const auto v = power_law_values(rows, cols, slope, seed);
  Field2D f(rows, cols);
  std::transform(v.begin(), v.end(), f.values.begin(), [](double x) { return static_cast<float>(x); });
  return f;
}

WindField streamfunction_wind(std::size_t rows, std::size_t cols, double slope, double peak_speed, std::uint64_t seed)
{
  const auto psi = power_law_field(rows, cols, slope, seed);
  WindField w{Field2D(rows, cols), Field2D(rows, cols)};
  double peak = 0.0;
  std::vector<double> u(rows * cols), v(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t rp = std::min(r + 1, rows - 1), rm = r == 0 ? 0 : r - 1;
      const std::size_t cp = (c + 1) % cols, cm = (c + cols - 1) % cols;
      const double dpsi_dy = (double(psi(rp, c)) - double(psi(rm, c))) / double(rp - rm);
      const double dpsi_dx = (double(psi(r, cp)) - double(psi(r, cm))) / 2.0;
      u[r * cols + c] = -dpsi_dy;
      v[r * cols + c] = dpsi_dx;
      peak = std::max(peak, std::hypot(u[r * cols + c], v[r * cols + c]));
    }
  const double s = peak > 0.0 ? peak_speed / peak : 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    w.u.values[i] = static_cast<float>(u[i] * s);
    w.v.values[i] = static_cast<float>(v[i] * s);
  }
  return w;
}

WindField vortex_wind(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed ^ 0x5eedf00dULL);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  const double yc = double(rows) * (0.5 + jitter(rng));
  const double xc = double(cols) * (0.5 + jitter(rng));
  const double rmax = double(std::min(rows, cols)) / 10.0;
  constexpr double kVmax = 40.0;
  constexpr double kInflow = 0.2;

  auto background = streamfunction_wind(rows, cols, 4.0, 5.0, seed);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double dy = double(r) - yc, dx = double(c) - xc;
      const double rad = std::hypot(dx, dy);
      if (rad == 0.0) continue;
      const double vt = rad < rmax ? kVmax * rad / rmax : kVmax * std::pow(rmax / rad, 0.6);
      const double vr = -kInflow * vt;
      // Counter-clockwise tangential plus radial components.
      const double u = (-vt * dy + vr * dx) / rad;
      const double v = (vt * dx + vr * dy) / rad;
      background.u(r, c) += static_cast<float>(u);
      background.v(r, c) += static_cast<float>(v);
    }
  return background;
}

Field2D generate_field(const SyntheticFieldSpec& spec)
{
  if (spec.rows < 2 || spec.cols < 2) throw ArgumentError("generate_field: need at least 2x2");
  Field2D f(spec.rows, spec.cols);
  switch (spec.kind) {
    case FieldKind::SmoothFourier:
    case FieldKind::Spiky: {
      const auto v = power_law_values(spec.rows, spec.cols, spec.spectral_slope, spec.seed);
      for (std::size_t i = 0; i < v.size(); ++i) f.values[i] = static_cast<float>(280.0 + 10.0 * v[i]);
      break;
    }
    case FieldKind::Vortex: {
      const auto w = vortex_wind(spec.rows, spec.cols, spec.seed);
      for (std::size_t i = 0; i < f.size(); ++i)
        f.values[i] = static_cast<float>(std::hypot(double(w.u.values[i]), double(w.v.values[i])));
      break;
    }
  }
  if (spec.kind == FieldKind::Spiky) {
    // Isolated points the base layer tends to smooth out.
    const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
    const double range = double(*hi) - double(*lo);
    const std::size_t n = f.size();
    const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.spike_fraction * double(n))));
    std::mt19937_64 rng(spec.seed * 0x9e3779b97f4a7c15ULL + 17);
    std::uniform_int_distribution<std::size_t> pos(0, n - 1);
    std::uniform_real_distribution<double> mag(0.3, 0.6);
    for (std::size_t k = 0; k < count; ++k) {
      const auto i = pos(rng);
      const double sign = (rng() & 1u) ? 1.0 : -1.0;
      f.values[i] = static_cast<float>(double(f.values[i]) + sign * mag(rng) * range);
    }
  }
  return f;
}

}  // namespace ebcc::bench
