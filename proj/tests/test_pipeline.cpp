#include <cmath>
#include <random>

#include "doctest.h"
#include "ebcc/base_codec.hpp"
#include "ebcc/dwt.hpp"
#include "ebcc/errors.hpp"
#include "ebcc/pipeline.hpp"
#include "test_support.hpp"

using namespace ebcc;

namespace {

Chunk chunk_of(Field2D f)
{
  Chunk c;
  c.values = std::move(f);
  return c;
}

bool bound_holds(const Field2D& orig, const Field2D& rec, double eps)
{
  const auto [lo, hi] = std::minmax_element(orig.values.begin(), orig.values.end());
  const double range = double(*hi) - double(*lo);
  for (std::size_t i = 0; i < orig.size(); ++i)
    if (std::fabs(double(rec.values[i]) - double(orig.values[i])) > eps * range) return false;
  return true;
}

Field2D with_spikes(Field2D f, std::size_t count, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pos(0, f.size() - 1);
  for (std::size_t k = 0; k < count; ++k) f.values[pos(rng)] += (k % 2 ? 60.0f : -60.0f);
  return f;
}

}  // namespace

TEST_CASE("params validation")
{
  EbccParams p;
  CHECK_NOTHROW(p.validate());
  p.epsilon_rel = 0;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  p = {};
  p.q = 0;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  p = {};
  p.q = 1.5;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  p = {};
  p.r0 = 0.5;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  p = {};
  p.search_tol = 0;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
}

TEST_CASE("ratio search on a gradient with a loose epsilon ends above r0")
{
  Field2D g(64, 64);
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 64; ++c) g(r, c) = float(r + c);
  const auto n = normalize(chunk_of(g));
  EbccParams p;
  p.epsilon_rel = 0.05;
  const auto s = search_base_ratio(n, p);
  CHECK(s.ratio >= p.r0);
  CHECK_FALSE(s.q_unreachable);
  const auto d = base_decode(s.encoding.bytes);
  CHECK(fraction_within(n.values.span(), d.span(), p.epsilon_rel) >= p.q);
  CHECK(s.encoding.q_achieved >= p.q);
}

TEST_CASE("ratio search with q below one leaves at most (1-q)n points above epsilon")
{
  const auto f = with_spikes(test::wavy_field(128, 128, 3), 20, 3);
  const auto n = normalize(chunk_of(f));
  EbccParams p;
  p.q = 1.0 - 1e-3;
  const auto s = search_base_ratio(n, p);
  const auto d = base_decode(s.encoding.bytes);
  std::size_t above = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    above += std::fabs(double(d.values[i]) - double(n.values.values[i])) > p.epsilon_rel;
  CHECK(double(above) <= (1.0 - p.q) * double(f.size()));
}

TEST_CASE("ratio search returns the largest feasible byte budget")
{
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto n = normalize(chunk_of(test::wavy_field(48, 48, seed)));
    EbccParams p;
    p.q = 1.0;
    auto session = default_base_codec().open(n.values, p.epsilon_rel);
    const auto s = search_base_ratio(*session, p.q, p.r0, p.search_tol);
    CHECK(s.encoding.q_achieved >= p.q);
    // One more byte must be infeasible; budgets step by one byte here.
    const auto len = s.encoding.bytes.size();
    const double r_next = double(float_bytes(n.values)) / double(len - 1);
    if (len > kSpihtHeaderSize) CHECK(session->encode(r_next).q_achieved < p.q);
  }
}

TEST_CASE("ratio search reports an unreachable quantile")
{
  const auto n = normalize(chunk_of(test::random_field(16, 16, 5)));
  WaveletBaseCodec shallow(2);
  auto session = shallow.open(n.values, 1e-6);
  const auto s = search_base_ratio(*session, 1.0, 10.0, 1e-3);
  CHECK(s.q_unreachable);
  CHECK(s.ratio == 1.0);
}

TEST_CASE("truncation search: zero, minimality, insufficiency")
{
  const auto n = normalize(chunk_of(test::wavy_field(32, 32, 11)));
  const auto base = base_decode(base_encode(n.values, 30.0, 0.01).bytes);
  Field2D residue(32, 32);
  for (std::size_t i = 0; i < residue.size(); ++i) residue.values[i] = n.values.values[i] - base.values[i];
  const auto stream = spiht_encode(forward_dwt(residue), kUnlimitedBytes);
  const auto orig = test::wavy_field(32, 32, 11);

  auto feasible = [&](const ErrorBound& b, std::size_t t) {
    return b.satisfied_by_normalized(combine_layers(base, stream.prefix(kSpihtHeaderSize + t)).span());
  };

  // Base alone is good enough for a huge epsilon.
  const ErrorBound loose{orig.span(), n.vmin, n.vmax, 0.5};
  CHECK(search_truncation(stream, base, loose) == 0);

  for (double eps : {0.003, 0.001, 3e-4}) {
    const ErrorBound b{orig.span(), n.vmin, n.vmax, eps};
    const auto t = search_truncation(stream, base, b);
    CHECK(feasible(b, t));
    CHECK(t > 0);
    CHECK_FALSE(feasible(b, t - 1));
  }

  // Two bit planes cannot reach a 1e-6 bound.
  const auto shallow = spiht_encode(forward_dwt(residue), kUnlimitedBytes, 2);
  const ErrorBound tight{orig.span(), n.vmin, n.vmax, 1e-6};
  CHECK_THROWS_AS(search_truncation(shallow, base, tight), ResidualInsufficient);
}

TEST_CASE("truncation search finds t = len when only the full stream works")
{
  // Residue with one coefficient whose last coded bit is needed.
  WaveletPyramid pyr{Field2D(16, 16), SubbandGeometry(16, 16, 2)};
  pyr.coeffs(0, 0) = 1.0f + 1.0f / 128.0f;
  const auto stream = spiht_encode(pyr, kUnlimitedBytes, 8);
  const Field2D zero(16, 16);
  const auto target = inverse_dwt(spiht_decode(stream.bytes));
  // Treat `target` as normalized original with vmin 0, vmax 1 so units match.
  const auto tight_err = [&] {
    double m = 0;
    const auto partial = combine_layers(zero, stream.prefix(stream.size() - 1));
    for (std::size_t i = 0; i < target.size(); ++i)
      m = std::max(m, std::fabs(double(partial.values[i]) - double(target.values[i])));
    return m;
  }();
  REQUIRE(tight_err > 0);
  const ErrorBound b{target.span(), 0.0f, 1.0f, tight_err / 2};
  CHECK(search_truncation(stream, zero, b) == stream.size() - kSpihtHeaderSize);
}

TEST_CASE("constant chunk short-circuits")
{
  const auto cc = compress_chunk(chunk_of(Field2D(8, 8, 4.5f)), {});
  CHECK(cc.mode == ChunkMode::Constant);
  CHECK(cc.payload.empty());
  CHECK(decompress_chunk(cc) == Field2D(8, 8, 4.5f));
}

TEST_CASE("tiny chunks round trip within the bound")
{
  for (std::size_t r : {1u, 2u, 3u}) {
    for (std::size_t c : {1u, 2u, 5u}) {
      const auto f = test::random_field(r, c, r * 10 + c, 0.0f, 10.0f);
      EbccParams p;
      p.epsilon_rel = 1e-3;
      const auto cc = compress_chunk(chunk_of(f), p);
      if (f.size() > 1) CHECK(cc.mode != ChunkMode::Constant);
      CHECK(bound_holds(f, decompress_chunk(cc), p.epsilon_rel));
    }
  }
}

TEST_CASE("fuzzed chunks satisfy the hard bound")
{
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(4, 40);
  const double eps_grid[] = {1e-3, 1e-2, 0.1};
  const double q_grid[] = {1.0 - 1e-3, 1.0 - 1e-5, 1.0};
  for (int k = 0; k < 60; ++k) {
    const auto rows = dim(rng), cols = dim(rng);
    auto f = k % 2 ? test::random_field(rows, cols, k, -3.0f, 3.0f) : test::wavy_field(rows, cols, k);
    if (k % 3 == 0) f = with_spikes(std::move(f), 2, k);
    EbccParams p;
    p.epsilon_rel = eps_grid[k % 3];
    p.q = q_grid[(k / 3) % 3];
    const auto cc = compress_chunk(chunk_of(f), p);
    CHECK(bound_holds(f, decompress_chunk(cc), p.epsilon_rel));
  }
}

TEST_CASE("two-layer output never exceeds the pure-base payload")
{
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto f = with_spikes(test::wavy_field(64, 64, seed), 3, seed);
    EbccParams p;
    p.epsilon_rel = 5e-3;
    p.q = 1.0 - 1e-3;
    const auto tr = compress_chunk_traced(chunk_of(f), p);
    REQUIRE(tr.pure_base_size);
    CHECK(tr.chunk.payload_size() <= *tr.pure_base_size);
    if (tr.chunk.mode == ChunkMode::TwoLayer) CHECK(tr.chunk.payload_size() < *tr.pure_base_size);
  }
}

TEST_CASE("two-layer with an empty residual decodes like the base alone")
{
  const auto f = test::wavy_field(32, 32, 4);
  const auto n = normalize(chunk_of(f));
  const auto base = base_encode(n.values, 8.0, 0.01);
  CompressedChunk cc;
  cc.mode = ChunkMode::TwoLayer;
  cc.vmin = n.vmin;
  cc.vmax = n.vmax;
  cc.rows = cc.cols = 32;
  const auto empty = spiht_encode(forward_dwt(Field2D(32, 32)), kUnlimitedBytes);
  cc.payload = base.bytes;
  cc.payload.insert(cc.payload.end(), empty.bytes.begin(), empty.bytes.end());
  cc.base_len = static_cast<std::uint32_t>(base.bytes.size());
  cc.residual_len = static_cast<std::uint32_t>(empty.size());
  CompressedChunk pure = cc;
  pure.mode = ChunkMode::PureBase;
  pure.payload = base.bytes;
  pure.residual_len = 0;
  CHECK(decompress_chunk(cc) == decompress_chunk(pure));
}

TEST_CASE("result is deterministic and independent of r0")
{
  const auto f = with_spikes(test::wavy_field(40, 40, 8), 2, 8);
  EbccParams p;
  p.q = 1.0 - 1e-3;
  const auto a = compress_chunk(chunk_of(f), p);
  CHECK(compress_chunk(chunk_of(f), p) == a);
  for (double r0 : {1.0, 3.0, 50.0, 400.0}) {
    p.r0 = r0;
    CHECK(compress_chunk(chunk_of(f), p) == a);
  }
}

TEST_CASE("pure-base payload does not grow as epsilon loosens")
{
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto f = test::wavy_field(64, 64, seed);
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double eps : {1e-3, 5e-3, 1e-2, 5e-2, 0.1}) {
      EbccParams p;
      p.epsilon_rel = eps;
      p.q = 1.0;
      const auto tr = compress_chunk_traced(chunk_of(f), p);
      REQUIRE(tr.pure_base_size);
      CHECK(*tr.pure_base_size <= prev);
      prev = *tr.pure_base_size;
    }
  }
}

TEST_CASE("malformed payloads raise FormatError")
{
  const auto f = test::wavy_field(32, 32, 1);
  auto cc = compress_chunk(chunk_of(f), {});
  auto bad = cc;
  bad.base_len += 1;
  CHECK_THROWS_AS(decompress_chunk(bad), FormatError);
  bad = cc;
  bad.rows = 16;
  CHECK_THROWS_AS(decompress_chunk(bad), FormatError);
  bad = cc;
  bad.payload[0] = 0;
  CHECK_THROWS_AS(decompress_chunk(bad), FormatError);
  bad = cc;
  bad.mode = ChunkMode::Constant;
  CHECK_THROWS_AS(decompress_chunk(bad), FormatError);
}

TEST_CASE("compress_grid: single chunk, ordering, threads, bound")
{
  const Shape4 dims{2, 2, 20, 24};
  std::vector<float> data(volume(dims));
  std::mt19937_64 rng(5);
  std::normal_distribution<float> nd(0.0f, 1.0f);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = 100.0f + 10.0f * std::sin(0.01f * float(i)) + 0.1f * nd(rng);

  const GridArray one(dims, {2, 2, 20, 24}, data);
  const auto single = compress_grid(one, {});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == compress_chunk(flatten_chunk(one, {0, 0, 0, 0}, dims), {}));

  const GridArray grid(dims, {1, 1, 20, 24}, data);
  const auto serial = compress_grid(grid, {}, 1);
  const auto parallel = compress_grid(grid, {}, 4);
  CHECK(serial == parallel);
  const auto origins = grid.chunk_origins();
  for (std::size_t i = 0; i < origins.size(); ++i)
    CHECK(serial[i] == compress_chunk(flatten_chunk(grid, origins[i], grid.chunk_extent(origins[i])), {}));

  const auto back = decompress_grid(dims, grid.chunk_shape(), serial);
  for (const auto& o : origins) {
    const auto e = grid.chunk_extent(o);
    CHECK(bound_holds(flatten_chunk(grid, o, e).values, flatten_chunk(back, o, e).values, 0.01));
  }
  CHECK_THROWS_AS(decompress_grid(dims, {1, 1, 10, 24}, serial), FormatError);
}
