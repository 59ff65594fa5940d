#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vsumm/segmentation.hpp"

using namespace vsumm;

namespace {

/// Segments of the given lengths, segment k centered on axis k with small
/// jitter.
Matrix blocks(const std::vector<std::size_t>& lengths, std::size_t dim, double noise, Rng& rng) {
  std::size_t n = 0;
  for (auto l : lengths) n += l;
  Matrix x(n, dim, 0.0);
  std::size_t t = 0;
  for (std::size_t k = 0; k < lengths.size(); ++k)
    for (std::size_t i = 0; i < lengths[k]; ++i, ++t) {
      for (std::size_t j = 0; j < dim; ++j) x(t, j) = noise * rng.normal();
      x(t, k % dim) += 1.0;
    }
  return x;
}

}  // namespace

TEST_CASE("segments from change points") {
  const auto r = segments_from_change_points({3, 7}, 10);
  REQUIRE(r.segments.size() == 3);
  CHECK(r.segments[0].start == 0);
  CHECK(r.segments[0].end == 2);
  CHECK(r.segments[1].start == 3);
  CHECK(r.segments[1].end == 6);
  CHECK(r.segments[2].start == 7);
  CHECK(r.segments[2].end == 9);
  CHECK(segments_from_change_points({}, 4).segments.size() == 1);
  CHECK_THROWS(segments_from_change_points({0}, 4));
  CHECK_THROWS(segments_from_change_points({3, 2}, 4));
}

TEST_CASE("prefix-sum scatter equals the direct sum") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    auto x = oracle::random_matrix(n, 1 + rng.below(8), rng);
    if (trial % 5 == 0)
      for (std::size_t j = 0; j < x.cols(); ++j) x(0, j) = 0.0;
    const KernelScatter s(x);
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t e = b + 1; e <= n; ++e)
        CHECK(std::abs(s.scatter(b, e) - oracle::direct_scatter(x, b, e)) <= 1e-9);
  }
}

TEST_CASE("penalty grows with the number of change points") {
  CHECK(change_point_penalty(0, 50) == 0.0);
  CHECK(change_point_penalty(1, 50) == doctest::Approx(std::log(50.0) + 1.0));
  for (std::size_t m = 1; m < 49; ++m)
    CHECK(change_point_penalty(m + 1, 50) > change_point_penalty(m, 50));
}

TEST_CASE("dynamic program matches exhaustive search") {
  Rng rng(2);
  for (int trial = 0; trial < 12; ++trial) {
    const auto x = oracle::random_matrix(12, 3, rng);
    const KernelScatter s(x);
    const auto paths = optimal_scatter_paths(s, 3);
    REQUIRE(paths.cost.size() == 4);
    for (std::size_t m = 0; m <= 3; ++m) {
      const auto best = oracle::exhaustive_segmentation(x, m);
      CHECK(paths.cost[m] == doctest::Approx(best.cost).epsilon(1e-9));
      double recomputed = 0.0;
      std::size_t start = 0;
      REQUIRE(paths.change_points[m].size() == m);
      for (auto c : paths.change_points[m]) {
        recomputed += oracle::direct_scatter(x, start, c);
        start = c;
      }
      recomputed += oracle::direct_scatter(x, start, 12);
      CHECK(recomputed == doctest::Approx(best.cost).epsilon(1e-9));
    }
  }
}

TEST_CASE("clear block structure is recovered exactly") {
  Rng rng(3);
  const std::vector<std::vector<std::size_t>> layouts{
      {10, 10, 10}, {8, 15, 9, 12}, {20, 8}, {9, 9, 9, 9, 9}};
  for (const auto& lengths : layouts) {
    const auto x = blocks(lengths, 6, 0.02, rng);
    const auto r = kts_segment(x, x.rows() / 4);
    std::vector<std::size_t> expect;
    std::size_t acc = 0;
    for (std::size_t k = 0; k + 1 < lengths.size(); ++k) expect.push_back(acc += lengths[k]);
    CHECK(r.change_points == expect);
    CHECK(r.segments.size() == lengths.size());
  }
}

TEST_CASE("constant input produces a single segment") {
  const Matrix x(40, 5, 0.3);
  const auto r = kts_segment(x, 10);
  CHECK(r.change_points.empty());
  REQUIRE(r.segments.size() == 1);
  CHECK(r.segments[0].end == 39);
}

TEST_CASE("segmentation arguments are checked") {
  const Matrix one(1, 2, 1.0);
  CHECK_THROWS(kts_segment(one, 0));
  const Matrix x(5, 2, 1.0);
  CHECK_THROWS(kts_segment(x, 5));
}

TEST_CASE("default change-point budget") {
  CHECK(default_max_change_points(20, 300, 30.0) == 5);
  CHECK(default_max_change_points(20, 6000, 30.0) == 19);
  CHECK(default_max_change_points(20, 30, 30.0) == 1);
  CHECK(default_max_change_points(20, 300, 0.0) == 5);
}

TEST_CASE("mapping boundaries to original frames") {
  const std::vector<std::size_t> picks{0, 15, 30, 45};
  const auto steps = segments_from_change_points({2}, 4);
  const auto mapped = map_segments_to_original(steps, picks, 60);
  REQUIRE(mapped.segments.size() == 2);
  CHECK(mapped.segments[0].start == 0);
  CHECK(mapped.segments[0].end == 29);
  CHECK(mapped.segments[1].start == 30);
  CHECK(mapped.segments[1].end == 59);
  CHECK(mapped.change_points == std::vector<std::size_t>{30});
}

TEST_CASE("shots come from stored change points or from segmentation") {
  Rng rng(4);
  VideoRecord v;
  v.video_id = "v";
  v.features = blocks({10, 10}, 4, 0.02, rng);
  v.n_frames_original = 200;
  for (std::size_t t = 0; t < 20; ++t) v.picks.push_back(t * 10);
  v.fps = 10.0;
  const auto auto_shots = shots_for(v);
  REQUIRE(auto_shots.size() == 2);
  CHECK(auto_shots[0].end == 99);
  CHECK(auto_shots[1].start == 100);

  v.change_points = {{0, 49}, {50, 149}, {150, 199}};
  const auto stored = shots_for(v);
  CHECK(stored == v.change_points);
}
