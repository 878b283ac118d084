#include "ebcc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

#include "ebcc/bench/suite.hpp"
#include "ebcc/container.hpp"
#include "ebcc/pipeline.hpp"

namespace ebcc {
namespace {

std::vector<std::size_t> parse_extents(const std::string& text)
{
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size() || item.front() == '-') throw ArgumentError("bad extent '" + item + "' in " + text);
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

struct UsageError : ArgumentError {
  using ArgumentError::ArgumentError;
};

Shape4 shape_arg(const std::string& text, bool allow_zero)
{
  try {
    const auto ext = parse_extents(text);
    const auto s = to_shape4(ext);
    if (!allow_zero)
      for (auto e : s)
        if (e == 0) throw ArgumentError("zero extent");
    return s;
  } catch (const ArgumentError& e) {
    throw UsageError(std::string("invalid shape: ") + e.what());
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"EBCC error-bounded climate data compressor"};
  app.require_subcommand(1);

  std::string input, output, shape_text, chunk_text;
  double rel_error = 0.0;
  double q = EbccParams{}.q;
  double r0 = EbccParams{}.r0;
  unsigned threads = 1;
  auto* compress = app.add_subcommand("compress", "compress a raw little-endian float32 file");
  compress->add_option("--input", input, "raw float32 input")->required();
  compress->add_option("--shape", shape_text, "T,P,H,W extents (1 to 4 values)")->required();
  compress->add_option("--rel-error", rel_error, "range-relative max error, e.g. 0.01")->required();
  compress->add_option("--q", q, "fraction of base-layer errors within the bound");
  compress->add_option("--chunk", chunk_text, "t,p,h,w chunk extents (default 1,1,H,W)");
  compress->add_option("--r0", r0, "initial base compression ratio");
  compress->add_option("--threads", threads, "chunks compressed concurrently");
  compress->add_option("-o,--output", output, "compressed output")->required();

  std::string dec_in, dec_out;
  auto* decompress = app.add_subcommand("decompress", "decompress to raw float32");
  decompress->add_option("input", dec_in, "compressed file")->required();
  decompress->add_option("-o,--output", dec_out, "raw float32 output")->required();

  std::string orig, recon, stats_shape;
  auto* stats = app.add_subcommand("stats", "error statistics of a reconstruction as JSON");
  stats->add_option("original", orig)->required();
  stats->add_option("reconstructed", recon)->required();
  stats->add_option("--shape", stats_shape, "T,P,H,W extents")->required();

  std::string suite, out_dir = "bench_out";
  std::size_t size = 128;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  auto* bench = app.add_subcommand("bench", "run a benchmark suite: stats, ablation, divergence, trajectory");
  bench->add_option("suite", suite, "suite name")->required();
  bench->add_option("--out", out_dir, "output directory for CSV/JSON");
  bench->add_option("--size", size, "synthetic field edge length");
  bench->add_option("--seeds", seeds, "field seeds");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*compress) {
      EbccParams params;
      params.epsilon_rel = rel_error;
      params.q = q;
      params.r0 = r0;
      try {
        params.validate();
      } catch (const ArgumentError& e) {
        throw UsageError(e.what());
      }
      const auto dims = shape_arg(shape_text, true);
      Shape4 chunk{1, 1, dims[2], dims[3]};
      if (!chunk_text.empty()) chunk = shape_arg(chunk_text, false);
      auto data = read_raw_floats(input);
      GridArray grid(dims, chunk, std::move(data));
      const auto chunks = compress_grid(grid, params, threads);
      write_file(chunks, {grid.dims(), grid.chunk_shape()}, output);
      return kExitOk;
    }
    if (*decompress) {
      const auto file = read_file(dec_in);
      const auto grid = decompress_grid(file.metadata.dims, file.metadata.chunk_shape, file.chunks);
      write_raw_floats(grid.data(), dec_out);
      return kExitOk;
    }
    if (*stats) {
      const auto dims = shape_arg(stats_shape, true);
      const auto a = read_raw_floats(orig);
      const auto b = read_raw_floats(recon);
      if (a.size() != volume(dims) || b.size() != volume(dims))
        throw FormatError("file length does not match --shape", std::min(a.size(), b.size()) * sizeof(float));
      const auto s = error_stats(a, b);
      out << nlohmann::json{{"max_abs", s.max_abs}, {"rel_max", s.rel_max}, {"rmse", s.rmse}}.dump() << '\n';
      return kExitOk;
    }
    if (*bench) {
      bench::SuiteConfig cfg;
      cfg.out_dir = out_dir;
      cfg.size = size;
      cfg.seeds = seeds;
      try {
        const auto rows = bench::run_suite(suite, cfg);
        out << bench::to_csv(rows);
      } catch (const ArgumentError& e) {
        throw UsageError(e.what());
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int cli_main(int argc, char** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace ebcc
