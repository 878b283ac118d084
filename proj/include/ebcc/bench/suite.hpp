#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ebcc/bench/synthetic.hpp"
#include "ebcc/bench/trajectory.hpp"
#include "ebcc/pipeline.hpp"

namespace ebcc::bench {

inline constexpr std::array<double, 5> kEpsilonGrid{0.001, 0.005, 0.01, 0.05, 0.1};
inline constexpr std::array<double, 5> kQGrid{1.0 - 1e-3, 1.0 - 1e-4, 1.0 - 1e-5, 1.0 - 1e-6, 1.0};

struct Roundtrip {
  Field2D reconstruction;
  std::size_t bytes = 0;
  double ratio = 0.0;
  ChunkMode mode = ChunkMode::Constant;
};

// Compresses a field as one chunk and decompresses it again.
Roundtrip ebcc_roundtrip(const Field2D& f, const EbccParams& params);

// One rate-distortion row: CSV columns suite, field_kind, seed, q,
// epsilon_rel, ratio, rel_max, rmse, ssim, plus a suite-specific derived_metric
// (divergence RMSE, mean particle-density RMSE, or relative compression ratio).
struct SuiteRow {
  std::string suite;
  std::string field_kind;
  std::uint64_t seed = 0;
  double q = 0.0;
  double epsilon_rel = 0.0;
  double ratio = 0.0;
  double rel_max = 0.0;
  double rmse = 0.0;
  double ssim = 0.0;
  double derived_metric = 0.0;
};

struct AblationCell {
  std::size_t ebcc_bytes = 0;
  std::size_t pure_base_bytes = 0;
  ChunkMode mode = ChunkMode::Constant;
  double relative_ratio() const noexcept { return double(pure_base_bytes) / double(ebcc_bytes); }
};

// EBCC payload vs the pure-base (q = 1) payload for the same field and epsilon.
AblationCell ablation_cell(const Field2D& f, double epsilon_rel, double q);

// RMSE between the divergence of the original and of the compressed winds.
double divergence_rmse(const WindField& wind, double epsilon_rel, double q, double dx = 1.0, double dy = 1.0);

struct TrajectoryScenario {
  std::string name;
  WindSeries wind;
  std::vector<Particle> seeds;
  double dt = 0.5;
  std::size_t steps = 200;
  DensityGrid grid;
};

std::vector<TrajectoryScenario> trajectory_scenarios(std::size_t size, std::size_t particles, std::uint64_t seed);

// Mean over time steps of the particle-density RMSE between trajectories in
// the original winds and in winds compressed at epsilon_rel.
double trajectory_density_rmse(const TrajectoryScenario& s, double epsilon_rel, double q);

struct SuiteConfig {
  std::filesystem::path out_dir = ".";
  std::size_t size = 128;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  bool write_files = true;
};

// Runs one of "stats", "ablation", "divergence", "trajectory", writing
// <out_dir>/<name>.csv and <out_dir>/<name>.json. Throws ArgumentError for an
// unknown or empty name.
std::vector<SuiteRow> run_suite(std::string_view name, const SuiteConfig& config);

std::string to_csv(const std::vector<SuiteRow>& rows);

}  // namespace ebcc::bench
