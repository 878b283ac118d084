#include <cmath>
#include <limits>
#include <numeric>

#include "doctest.h"
#include "ebcc/errors.hpp"
#include "ebcc/grid.hpp"
#include "ebcc/metrics.hpp"
#include "test_support.hpp"

using namespace ebcc;

namespace {

std::vector<float> iota_data(std::size_t n)
{
  std::vector<float> v(n);
  std::iota(v.begin(), v.end(), 0.0f);
  return v;
}

}  // namespace

TEST_CASE("flatten folds the leading axes into rows")
{
  const auto a = flatten_block(iota_data(32), {1, 1, 4, 8});
  CHECK(a.values.rows == 4);
  CHECK(a.values.cols == 8);

  const auto b = flatten_block(iota_data(1200), {2, 3, 10, 20});
  CHECK(b.values.rows == 60);
  CHECK(b.values.cols == 20);
  // Element (t=1, p=2, h=9, w=19) is the last one and lands in the last row.
  CHECK(b.values(59, 19) == 1199.0f);
}

TEST_CASE("flatten and unflatten round trip every tile")
{
  const Shape4 dims{2, 3, 7, 5};
  GridArray grid(dims, {1, 2, 4, 3}, iota_data(volume(dims)));
  GridArray copy(dims, {1, 2, 4, 3}, std::vector<float>(volume(dims), -1.0f));
  CHECK(grid.chunk_count() == 2 * 2 * 2 * 2);
  for (const auto& o : grid.chunk_origins()) {
    const auto e = grid.chunk_extent(o);
    const auto ch = flatten_chunk(grid, o, e);
    CHECK(ch.values.rows == e[0] * e[1] * e[2]);
    unflatten_chunk(ch.values, o, e, copy);
  }
  CHECK(std::equal(grid.data().begin(), grid.data().end(), copy.data().begin()));
}

TEST_CASE("a zero chunk extent means the full axis")
{
  GridArray grid({1, 1, 6, 4}, {0, 0, 0, 0}, iota_data(24));
  CHECK(grid.chunk_count() == 1);
  CHECK(grid.chunk_shape() == Shape4{1, 1, 6, 4});
}

TEST_CASE("ingest rejects non-finite values and reports the index")
{
  auto d = iota_data(16);
  d[5] = std::numeric_limits<float>::quiet_NaN();
  try {
    GridArray g({1, 1, 4, 4}, {1, 1, 4, 4}, d);
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(e.index() == 5);
  }
  d[5] = std::numeric_limits<float>::infinity();
  CHECK_THROWS_AS(flatten_block(d, {1, 1, 4, 4}), IngestError);
  CHECK_THROWS_AS(GridArray({1, 1, 4, 4}, {1, 1, 4, 4}, iota_data(15)), ArgumentError);
}

TEST_CASE("to_shape4 pads on the left")
{
  const std::vector<std::size_t> two{5, 6};
  CHECK(to_shape4(two) == Shape4{1, 1, 5, 6});
}

TEST_CASE("normalize constant and linear chunks")
{
  Chunk c;
  c.values = Field2D(1, 3, std::vector<float>{3, 3, 3});
  const auto n = normalize(c);
  CHECK(n.constant);
  CHECK(n.vmin == 3.0f);
  CHECK(n.values.values == std::vector<float>{0, 0, 0});

  c.values = Field2D(1, 3, std::vector<float>{0, 5, 10});
  const auto m = normalize(c);
  CHECK_FALSE(m.constant);
  CHECK(m.vmin == 0.0f);
  CHECK(m.vmax == 10.0f);
  CHECK(m.values.values == std::vector<float>{0.0f, 0.5f, 1.0f});
  CHECK(denormalize(m.values, m.vmin, m.vmax).values == c.values.values);
}

TEST_CASE("error_stats on a two-point example")
{
  const std::vector<float> a{0, 10}, b{1, 10};
  const auto s = error_stats(a, b);
  CHECK(s.max_abs == doctest::Approx(1.0));
  CHECK(s.rel_max == doctest::Approx(0.1));
  CHECK(s.rmse == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(error_stats(a, std::vector<float>{1}), ArgumentError);
}

TEST_CASE("error_stats matches a brute-force loop and is affine invariant")
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto a = test::random_field(9, 13, seed, -50, 50);
    const auto b = test::random_field(9, 13, seed + 100, -50, 50);
    double mx = 0, sq = 0, lo = a.values[0], hi = a.values[0];
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = double(b.values[i]) - double(a.values[i]);
      mx = std::max(mx, std::fabs(d));
      sq += d * d;
      lo = std::min(lo, double(a.values[i]));
      hi = std::max(hi, double(a.values[i]));
    }
    const auto s = error_stats(a, b);
    CHECK(s.max_abs == doctest::Approx(mx).epsilon(1e-12));
    CHECK(s.rmse == doctest::Approx(std::sqrt(sq / double(a.size()))).epsilon(1e-12));
    CHECK(s.rel_max == doctest::Approx(mx / (hi - lo)).epsilon(1e-12));

    // Scaling by a power of two and shifting keeps rel_max.
    Field2D a2 = a, b2 = b;
    for (auto& v : a2.values) v = v * 4.0f + 1024.0f;
    for (auto& v : b2.values) v = v * 4.0f + 1024.0f;
    CHECK(error_stats(a2, b2).rel_max == doctest::Approx(s.rel_max).epsilon(1e-5));
  }
}

TEST_CASE("ErrorBound judges in original units")
{
  const std::vector<float> orig{0, 5, 10};
  const ErrorBound bound{orig, 0.0f, 10.0f, 0.1};
  CHECK(bound.satisfied_by(std::vector<float>{1, 5, 10}));
  CHECK_FALSE(bound.satisfied_by(std::vector<float>{1.01f, 5, 10}));
  CHECK(bound.satisfied_by_normalized(std::vector<float>{0.1f, 0.5f, 1.0f}));
  CHECK_FALSE(bound.satisfied_by_normalized(std::vector<float>{0.2f, 0.5f, 1.0f}));
  CHECK(within_relative_bound(0.0, 0.0, 0.01));
  CHECK_FALSE(within_relative_bound(1e-9, 0.0, 0.01));
}
