#include "ebcc/bench/suite.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ebcc/bench/divergence.hpp"
#include "ebcc/bench/field_metrics.hpp"
#include "ebcc/container.hpp"
#include "ebcc/errors.hpp"

namespace ebcc::bench {

using nlohmann::json;

Roundtrip ebcc_roundtrip(const Field2D& f, const EbccParams& params)
{
  Chunk c;
  c.values = f;
  c.extent = {1, 1, f.rows, f.cols};
  const auto cc = compress_chunk(c, params);
  Roundtrip r;
  r.reconstruction = decompress_chunk(cc);
  r.bytes = cc.payload_size() + kChunkRecordHeaderSize;
  r.ratio = double(f.size() * sizeof(float)) / double(r.bytes);
  r.mode = cc.mode;
  return r;
}

AblationCell ablation_cell(const Field2D& f, double epsilon_rel, double q)
{
  Chunk c;
  c.values = f;
  EbccParams p;
  p.epsilon_rel = epsilon_rel;
  p.q = q;
  const auto ebcc = compress_chunk(c, p);
  p.q = 1.0;
  const auto pure = compress_chunk(c, p);
  return {ebcc.payload_size(), pure.payload_size(), ebcc.mode};
}

double divergence_rmse(const WindField& wind, double epsilon_rel, double q, double dx, double dy)
{
  EbccParams p;
  p.epsilon_rel = epsilon_rel;
  p.q = q;
  const auto u = ebcc_roundtrip(wind.u, p).reconstruction;
  const auto v = ebcc_roundtrip(wind.v, p).reconstruction;
  const auto d0 = horizontal_divergence(wind.u, wind.v, dx, dy);
  const auto d1 = horizontal_divergence(u, v, dx, dy);
  return error_stats(d0, d1).rmse;
}

namespace {

void scale_to_speed(WindField& w, double peak_speed)
{
  double peak = 0.0;
  for (std::size_t i = 0; i < w.u.size(); ++i)
    peak = std::max(peak, std::hypot(double(w.u.values[i]), double(w.v.values[i])));
  const double s = peak > 0.0 ? peak_speed / peak : 0.0;
  for (std::size_t i = 0; i < w.u.size(); ++i) {
    w.u.values[i] = static_cast<float>(w.u.values[i] * s);
    w.v.values[i] = static_cast<float>(w.v.values[i] * s);
  }
}

WindField double_gyre(std::size_t size, double t, double period, double peak_speed)
{
  // Time-periodic double gyre on [0, 2] x [0, 1] stretched over a size x size grid.
  constexpr double kA = 0.1, kEps = 0.25;
  const double omega = 2.0 * 3.141592653589793 / period;
  const double a = kEps * std::sin(omega * t);
  const double b = 1.0 - 2.0 * kEps * std::sin(omega * t);
  WindField w{Field2D(size, size), Field2D(size, size)};
  constexpr double pi = 3.141592653589793;
  for (std::size_t r = 0; r < size; ++r)
    for (std::size_t c = 0; c < size; ++c) {
      const double x = 2.0 * double(c) / double(size);
      const double y = double(r) / double(size - 1);
      const double f = a * x * x + b * x;
      const double dfdx = 2.0 * a * x + b;
      w.u(r, c) = static_cast<float>(-pi * kA * std::sin(pi * f) * std::cos(pi * y));
      w.v(r, c) = static_cast<float>(pi * kA * std::cos(pi * f) * std::sin(pi * y) * dfdx);
    }
  scale_to_speed(w, peak_speed);
  return w;
}

void add_snapshot(WindSeries& s, WindField w)
{
  s.u.push_back(std::move(w.u));
  s.v.push_back(std::move(w.v));
}

}  // namespace

std::vector<TrajectoryScenario> trajectory_scenarios(std::size_t size, std::size_t particles, std::uint64_t seed)
{
  constexpr double kPeak = 0.8;  // cells per unit time
  std::vector<TrajectoryScenario> out;
  auto make = [&](std::string name) {
    TrajectoryScenario s;
    s.name = std::move(name);
    s.dt = 0.5;
    s.steps = 200;
    s.grid = {16, 16, 0.0, double(size), 0.0, double(size - 1)};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, double(size)), uy(0.0, double(size - 1));
    s.seeds.resize(particles);
    for (auto& p : s.seeds) p = {ux(rng), uy(rng)};
    return s;
  };

  {
    auto s = make("streamfunction");
    s.wind.snapshot_interval = 50.0;
    for (std::uint64_t k = 0; k < 3; ++k) add_snapshot(s.wind, streamfunction_wind(size, size, 4.0, kPeak, seed + k));
    out.push_back(std::move(s));
  }
  {
    auto s = make("vortex");
    auto w = vortex_wind(size, size, seed);
    scale_to_speed(w, kPeak);
    add_snapshot(s.wind, std::move(w));
    out.push_back(std::move(s));
  }
  {
    auto s = make("double-gyre");
    s.wind.snapshot_interval = 12.5;
    for (int k = 0; k < 9; ++k) add_snapshot(s.wind, double_gyre(size, 12.5 * k, 100.0, kPeak));
    out.push_back(std::move(s));
  }
  return out;
}

double trajectory_density_rmse(const TrajectoryScenario& s, double epsilon_rel, double q)
{
  EbccParams p;
  p.epsilon_rel = epsilon_rel;
  p.q = q;
  WindSeries compressed = s.wind;
  for (std::size_t k = 0; k < s.wind.u.size(); ++k) {
    compressed.u[k] = ebcc_roundtrip(s.wind.u[k], p).reconstruction;
    compressed.v[k] = ebcc_roundtrip(s.wind.v[k], p).reconstruction;
  }
  const auto ref = advect_particles(s.wind, s.seeds, s.dt, s.steps);
  const auto got = advect_particles(compressed, s.seeds, s.dt, s.steps);
  const auto per_step = particle_density_rmse(ref, got, s.grid);
  double mean = 0.0;
  for (double x : per_step) mean += x;
  return mean / double(per_step.size());
}

namespace {

SuiteRow rd_row(std::string suite, std::string kind, std::uint64_t seed, double q, double eps, const Field2D& f,
                const Roundtrip& rt)
{
  const auto st = error_stats(f, rt.reconstruction);
  SuiteRow row{std::move(suite), std::move(kind), seed, q, eps, rt.ratio, st.rel_max, st.rmse, 0.0, 0.0};
  row.ssim = ssim(f, rt.reconstruction);
  return row;
}

json row_json(const SuiteRow& r)
{
  return json{{"suite", r.suite}, {"field_kind", r.field_kind}, {"seed", r.seed},         {"q", r.q},
              {"epsilon_rel", r.epsilon_rel}, {"ratio", r.ratio}, {"rel_max", r.rel_max}, {"rmse", r.rmse},
              {"ssim", r.ssim}, {"derived_metric", r.derived_metric}};
}

json report_json(const MetricReport& m)
{
  return json{{"histogram", {{"edges", m.histogram.edges}, {"counts", m.histogram.counts}}},
              {"spectrum",
               {{"wavenumber", m.spectrum.wavenumber},
                {"original", m.spectrum.power},
                {"reconstructed", m.reconstructed_spectrum.power}}}};
}

}  // namespace

std::string to_csv(const std::vector<SuiteRow>& rows)
{
  std::ostringstream os;
  os.precision(10);
  os << "suite,field_kind,seed,q,epsilon_rel,ratio,rel_max,rmse,ssim,derived_metric\n";
  for (const auto& r : rows)
    os << r.suite << ',' << r.field_kind << ',' << r.seed << ',' << r.q << ',' << r.epsilon_rel << ',' << r.ratio
       << ',' << r.rel_max << ',' << r.rmse << ',' << r.ssim << ',' << r.derived_metric << '\n';
  return os.str();
}

std::vector<SuiteRow> run_suite(std::string_view name, const SuiteConfig& cfg)
{
  if (name.empty()) throw ArgumentError("suite name required: stats, ablation, divergence, trajectory");
  std::vector<SuiteRow> rows;
  json reports = json::array();
  const double q_default = EbccParams{}.q;

  if (name == "stats") {
    for (auto kind : {FieldKind::SmoothFourier, FieldKind::Vortex, FieldKind::Spiky})
      for (auto seed : cfg.seeds) {
        const auto f = generate_field({kind, cfg.size, cfg.size, seed});
        for (double eps : kEpsilonGrid) {
          EbccParams p;
          p.epsilon_rel = eps;
          const auto rt = ebcc_roundtrip(f, p);
          rows.push_back(rd_row("stats", to_string(kind), seed, q_default, eps, f, rt));
          auto j = row_json(rows.back());
          j["report"] = report_json(make_report(f, rt.reconstruction, rt.ratio));
          reports.push_back(std::move(j));
        }
      }
  } else if (name == "ablation") {
    for (auto seed : cfg.seeds) {
      const auto f = generate_field({FieldKind::Spiky, cfg.size, cfg.size, seed});
      for (double eps : kEpsilonGrid)
        for (double q : kQGrid) {
          const auto cell = ablation_cell(f, eps, q);
          SuiteRow row{"ablation", "spiky", seed, q, eps, double(f.size() * 4) / double(cell.ebcc_bytes), 0, 0, 0,
                       cell.relative_ratio()};
          rows.push_back(row);
          reports.push_back(row_json(row));
        }
    }
  } else if (name == "divergence") {
    for (auto seed : cfg.seeds) {
      const auto w = vortex_wind(cfg.size, cfg.size, seed);
      for (double eps : kEpsilonGrid) {
        EbccParams p;
        p.epsilon_rel = eps;
        const auto rt = ebcc_roundtrip(w.u, p);
        auto row = rd_row("divergence", "vortex", seed, q_default, eps, w.u, rt);
        row.derived_metric = divergence_rmse(w, eps, q_default);
        rows.push_back(row);
        reports.push_back(row_json(row));
      }
    }
  } else if (name == "trajectory") {
    for (auto seed : cfg.seeds)
      for (const auto& sc : trajectory_scenarios(cfg.size, 2000, seed))
        for (double eps : kEpsilonGrid) {
          EbccParams p;
          p.epsilon_rel = eps;
          const auto rt = ebcc_roundtrip(sc.wind.u.front(), p);
          auto row = rd_row("trajectory", sc.name, seed, q_default, eps, sc.wind.u.front(), rt);
          row.derived_metric = trajectory_density_rmse(sc, eps, q_default);
          rows.push_back(row);
          reports.push_back(row_json(row));
        }
  } else {
    throw ArgumentError("unknown suite: " + std::string(name));
  }

  if (cfg.write_files) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto base = cfg.out_dir / std::string(name);
    std::ofstream csv(base.string() + ".csv");
    csv << to_csv(rows);
    std::ofstream js(base.string() + ".json");
    js << reports.dump(2) << '\n';
    if (!csv || !js) throw IoError("failed to write suite output under " + cfg.out_dir.string());
  }
  return rows;
}

}  // namespace ebcc::bench
