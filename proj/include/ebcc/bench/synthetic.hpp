#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "ebcc/field.hpp"

namespace ebcc::bench {

enum class FieldKind { SmoothFourier, Vortex, Spiky };

const char* to_string(FieldKind k) noexcept;
// Accepts "smooth-fourier", "vortex", "spiky"; throws ArgumentError otherwise.
FieldKind parse_field_kind(std::string_view name);

struct SyntheticFieldSpec {
  FieldKind kind = FieldKind::SmoothFourier;
  std::size_t rows = 128;
  std::size_t cols = 128;
  std::uint64_t seed = 0;
  double spike_fraction = 1e-4;
  // Exponent of the annular-mean power spectrum, P(k) ~ k^-slope.
  double spectral_slope = 4.0;
};

// Deterministic given the spec. Values are offset and scaled like a
// temperature field (mean 280, standard deviation 10 before spikes).
Field2D generate_field(const SyntheticFieldSpec& spec);

// Zero-mean random field with P(k) ~ k^-slope and unit standard deviation.
Field2D power_law_field(std::size_t rows, std::size_t cols, double slope, std::uint64_t seed);

struct WindField {
  Field2D u;  // along columns (x)
  Field2D v;  // along rows (y)
};

// Rankine-style vortex with weak inflow over a smooth background flow; the
// divergence case-study stand-in. Units: m/s.
WindField vortex_wind(std::size_t rows, std::size_t cols, std::uint64_t seed);

// Non-divergent flow derived from a power-law stream function.
WindField streamfunction_wind(std::size_t rows, std::size_t cols, double slope, double peak_speed, std::uint64_t seed);

}  // namespace ebcc::bench
