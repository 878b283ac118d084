#pragma once

#include <cstddef>
#include <vector>

#include "ebcc/field.hpp"
#include "ebcc/metrics.hpp"

namespace ebcc::bench {

// Mean local SSIM over all fully contained 11x11 Gaussian windows (sigma 1.5),
// K1 = 0.01, K2 = 0.03, dynamic range max(a) - min(a). Requires equal shapes
// of at least 11x11.
double ssim(const Field2D& a, const Field2D& b);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges spanning [-E, E], E = max|b - a|
  std::vector<std::size_t> counts;

  std::size_t total() const noexcept;
};

// Histogram of b - a. With E = 0 every point lands in the middle bin.
Histogram error_histogram(const Field2D& a, const Field2D& b, std::size_t bins);

// Fraction of histogram mass in the central quarter of the bin range.
double central_mass(const Histogram& h);

struct Spectrum {
  std::vector<double> wavenumber;  // 1 .. floor(min(rows, cols) / 2)
  std::vector<double> power;       // mean periodogram power per annulus
  std::vector<std::size_t> modes;  // periodogram entries per annulus

  // Sum of power * modes; equals the field variance.
  double total_power() const;
};

// Radially averaged 2D periodogram |F(k)|^2 / N^2 of the mean-removed field.
// Wavenumbers are scaled to the shorter side; modes beyond the last annulus
// fold into it, so the spectrum sums to the variance.
Spectrum radial_power_spectrum(const Field2D& a);

struct MetricReport {
  ErrorStats error_stats;
  double ssim = 0.0;
  Histogram histogram;
  Spectrum spectrum;
  Spectrum reconstructed_spectrum;
  double compression_ratio = 0.0;
};

MetricReport make_report(const Field2D& original, const Field2D& reconstructed, double compression_ratio,
                         std::size_t histogram_bins = 41);

}  // namespace ebcc::bench
