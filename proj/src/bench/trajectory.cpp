#include "ebcc/bench/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "ebcc/errors.hpp"

namespace ebcc::bench {
namespace {

class Sampler {
 public:
  explicit Sampler(const WindSeries& w) : w_(w), rows_(w.u.front().rows), cols_(w.u.front().cols) {}

  double period() const { return double(cols_) * w_.dx; }
  double y_max() const { return double(rows_ - 1) * w_.dy; }

  void wrap(Particle& p) const
  {
    p.x = std::fmod(p.x, period());
    if (p.x < 0.0) p.x += period();
    p.y = std::clamp(p.y, 0.0, y_max());
  }

  Particle velocity(double t, Particle p) const
  {
    wrap(p);
    const std::size_t snaps = w_.u.size();
    double s = snaps > 1 ? t / w_.snapshot_interval : 0.0;
    s = std::clamp(s, 0.0, double(snaps - 1));
    const std::size_t s0 = std::min<std::size_t>(static_cast<std::size_t>(s), snaps > 1 ? snaps - 2 : 0);
    const double ft = snaps > 1 ? s - double(s0) : 0.0;
    const std::size_t s1 = snaps > 1 ? s0 + 1 : 0;

    const double fx = p.x / w_.dx, fy = p.y / w_.dy;
    const auto i0 = static_cast<std::size_t>(std::floor(fx)) % cols_;
    const std::size_t i1 = (i0 + 1) % cols_;
    const double ax = fx - std::floor(fx);
    const std::size_t j0 = std::min<std::size_t>(static_cast<std::size_t>(fy), rows_ - 2);
    const double ay = std::clamp(fy - double(j0), 0.0, 1.0);

    auto bilinear = [&](const Field2D& f) {
      return (1 - ay) * ((1 - ax) * f(j0, i0) + ax * f(j0, i1)) + ay * ((1 - ax) * f(j0 + 1, i0) + ax * f(j0 + 1, i1));
    };
    return {(1 - ft) * bilinear(w_.u[s0]) + ft * bilinear(w_.u[s1]),
            (1 - ft) * bilinear(w_.v[s0]) + ft * bilinear(w_.v[s1])};
  }

 private:
  const WindSeries& w_;
  std::size_t rows_, cols_;
};

}  // namespace

Trajectories advect_particles(const WindSeries& wind, std::span<const Particle> seeds, double dt, std::size_t steps)
{
  if (wind.u.empty() || wind.u.size() != wind.v.size()) throw ArgumentError("advect_particles: bad wind series");
  const auto& f0 = wind.u.front();
  if (f0.rows < 2 || f0.cols < 2) throw ArgumentError("advect_particles: grid must be at least 2x2");
  double max_speed = 0.0;
  for (std::size_t s = 0; s < wind.u.size(); ++s) {
    if (!wind.u[s].same_shape(f0) || !wind.v[s].same_shape(f0)) throw ArgumentError("advect_particles: shape mismatch");
    for (std::size_t i = 0; i < f0.size(); ++i)
      max_speed = std::max(max_speed, std::hypot(double(wind.u[s].values[i]), double(wind.v[s].values[i])));
  }
  if (!(dt > 0.0) || dt * max_speed >= std::min(wind.dx, wind.dy))
    throw ArgumentError("advect_particles: time step violates dt * max_speed < cell size");

  const Sampler field(wind);
  Trajectories traj;
  traj.reserve(steps + 1);
  traj.emplace_back(seeds.begin(), seeds.end());
  for (auto& p : traj.back()) field.wrap(p);
  for (std::size_t step = 1; step <= steps; ++step) {
    const double t = double(step - 1) * dt;
    auto next = traj.back();
    for (auto& p : next) {
      const auto k1 = field.velocity(t, p);
      const auto k2 = field.velocity(t + dt / 2, {p.x + dt / 2 * k1.x, p.y + dt / 2 * k1.y});
      const auto k3 = field.velocity(t + dt / 2, {p.x + dt / 2 * k2.x, p.y + dt / 2 * k2.y});
      const auto k4 = field.velocity(t + dt, {p.x + dt * k3.x, p.y + dt * k3.y});
      p.x += dt / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
      p.y += dt / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw SimulationError("non-finite particle position", step);
      field.wrap(p);
    }
    traj.push_back(std::move(next));
  }
  return traj;
}

std::vector<double> particle_density_rmse(const Trajectories& a, const Trajectories& b, const DensityGrid& g)
{
  if (a.size() != b.size()) throw ArgumentError("particle_density_rmse: step count mismatch");
  if (g.nx == 0 || g.ny == 0 || !(g.x1 > g.x0) || !(g.y1 > g.y0))
    throw ArgumentError("particle_density_rmse: bad density grid");
  auto histogram = [&](const std::vector<Particle>& ps) {
    std::vector<double> h(g.nx * g.ny, 0.0);
    for (const auto& p : ps) {
      const auto ix = std::clamp<std::ptrdiff_t>(
          static_cast<std::ptrdiff_t>(std::floor((p.x - g.x0) / (g.x1 - g.x0) * double(g.nx))), 0, std::ptrdiff_t(g.nx) - 1);
      const auto iy = std::clamp<std::ptrdiff_t>(
          static_cast<std::ptrdiff_t>(std::floor((p.y - g.y0) / (g.y1 - g.y0) * double(g.ny))), 0, std::ptrdiff_t(g.ny) - 1);
      h[std::size_t(iy) * g.nx + std::size_t(ix)] += 1.0;
    }
    if (!ps.empty())
      for (auto& x : h) x /= double(ps.size());
    return h;
  };
  std::vector<double> out;
  out.reserve(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) {
    const auto ha = histogram(a[s]);
    const auto hb = histogram(b[s]);
    double sq = 0.0;
    for (std::size_t i = 0; i < ha.size(); ++i) sq += (ha[i] - hb[i]) * (ha[i] - hb[i]);
    out.push_back(std::sqrt(sq / double(ha.size())));
  }
  return out;
}

}  // namespace ebcc::bench
