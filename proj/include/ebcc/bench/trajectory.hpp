#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ebcc/field.hpp"

namespace ebcc::bench {

struct Particle {
  double x = 0.0;  // along columns, periodic over cols * dx
  double y = 0.0;  // along rows, clamped to [0, (rows - 1) * dy]
};

// Wind snapshots on a uniform grid, linearly interpolated in time.
struct WindSeries {
  std::vector<Field2D> u;
  std::vector<Field2D> v;
  double snapshot_interval = 1.0;
  double dx = 1.0;
  double dy = 1.0;
};

// positions[step][particle], step 0 being the seeds.
using Trajectories = std::vector<std::vector<Particle>>;

// RK4 with bilinear interpolation in space. Throws ArgumentError if
// dt * max speed exceeds the cell size and SimulationError if a particle
// position becomes non-finite.
Trajectories advect_particles(const WindSeries& wind, std::span<const Particle> seeds, double dt, std::size_t steps);

struct DensityGrid {
  std::size_t nx = 16;
  std::size_t ny = 16;
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
};

// Per-step RMSE between the two normalized particle-count histograms.
std::vector<double> particle_density_rmse(const Trajectories& a, const Trajectories& b, const DensityGrid& grid);

}  // namespace ebcc::bench
