#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "vsumm/rewards.hpp"

using namespace vsumm;

namespace {

std::vector<std::size_t> random_subset(std::size_t n, Rng& rng, double p = 0.4) {
  std::vector<std::size_t> s;
  for (std::size_t t = 0; t < n; ++t)
    if (rng.bernoulli(p)) s.push_back(t);
  if (s.empty()) s.push_back(rng.below(n));
  return s;
}

}  // namespace

TEST_CASE("dissimilarity of canonical vector pairs") {
  const std::vector<double> e1{1, 0}, e2{0, 1}, neg{-1, 0}, zero{0, 0};
  CHECK(dissimilarity(e1, e1) == 0.0);
  CHECK(dissimilarity(e1, e2) == 1.0);
  CHECK(dissimilarity(e1, neg) == 2.0);
  CHECK(dissimilarity(e1, zero) == 1.0);
  CHECK(dissimilarity(zero, zero) == 1.0);
}

TEST_CASE("diversity reward examples") {
  const auto cfg_inf = RewardConfig::unlimited();
  Matrix same(5, 3, 0.0);
  for (std::size_t t = 0; t < 5; ++t) same(t, 1) = 2.0;
  const std::vector<std::size_t> all{0, 1, 2, 3, 4};
  CHECK(diversity_reward(same, all, cfg_inf) == 0.0);

  const Matrix axes(3, 2, std::vector<double>{1, 0, 0, 1, 1, 0});
  const std::vector<std::size_t> first_two{0, 1};
  CHECK(diversity_reward(axes, first_two, cfg_inf) == doctest::Approx(1.0));

  Matrix far(31, 2, 0.0);
  for (std::size_t t = 0; t < 31; ++t) far(t, 0) = 1.0;
  const std::vector<std::size_t> ends{0, 30};
  CHECK(diversity_reward(far, ends, RewardConfig{20, true}) == 1.0);
  CHECK(diversity_reward(far, ends, cfg_inf) == 0.0);
  const std::vector<std::size_t> near{0, 20};
  CHECK(diversity_reward(far, near, RewardConfig{20, true}) == 0.0);

  const std::vector<std::size_t> single{2};
  CHECK(diversity_reward(axes, single, cfg_inf) == 0.0);
}

TEST_CASE("representativeness reward examples") {
  Rng rng(1);
  const auto x = oracle::random_matrix(7, 4, rng);
  std::vector<std::size_t> all(7);
  std::iota(all.begin(), all.end(), std::size_t{0});
  CHECK(representativeness_reward(x, all) == 1.0);

  const Matrix two(2, 1, std::vector<double>{0.0, 2.0});
  const std::vector<std::size_t> first{0};
  CHECK(representativeness_reward(two, first) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(representativeness_reward(two, first) == doctest::Approx(0.36788).epsilon(1e-5));

  const Matrix same(4, 2, 1.0);
  const std::vector<std::size_t> any{2};
  CHECK(representativeness_reward(same, any) == 1.0);
  CHECK_THROWS(representativeness_reward(same, std::vector<std::size_t>{}));
}

TEST_CASE("total reward examples") {
  const Matrix same(6, 2, 1.0);
  const std::vector<std::uint8_t> none(6, 0), all(6, 1);
  const auto z = total_reward(same, none, RewardConfig{20, true});
  CHECK(z.total == 0.0);
  CHECK(z.r_div == 0.0);
  CHECK(z.r_rep == 0.0);

  const auto v = total_reward(same, all, RewardConfig{0, true});
  CHECK(v.r_rep == 1.0);
  CHECK(v.r_div == 1.0);
  CHECK(v.total == 2.0);

  Rng rng(2);
  const auto x = oracle::random_matrix(6, 3, rng);
  std::vector<std::uint8_t> one(6, 0);
  one[3] = 1;
  const auto s = total_reward(x, one, RewardConfig{});
  CHECK(s.r_div == 0.0);
  CHECK(s.total == s.r_rep);
}

TEST_CASE("rewards equal the brute-force formulas and stay in range") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(19);
    const auto x = oracle::random_matrix(n, 1 + rng.below(6), rng);
    const auto sel = random_subset(n, rng);
    const std::size_t lam = rng.below(6);
    const double d_inf = diversity_reward(x, sel, RewardConfig::unlimited());
    const double d_lam = diversity_reward(x, sel, RewardConfig{lam, true});
    CHECK(std::abs(d_inf - oracle::diversity(x, sel, std::nullopt)) <= 1e-12);
    CHECK(std::abs(d_lam - oracle::diversity(x, sel, lam)) <= 1e-12);
    const double r = representativeness_reward(x, sel);
    CHECK(std::abs(r - oracle::representativeness(x, sel)) <= 1e-12);
    CHECK(d_inf >= 0.0);
    CHECK(d_inf <= 2.0);
    CHECK(r > 0.0);
    CHECK(r <= 1.0);

    const RewardTables tables(x);
    CHECK(std::abs(tables.diversity(sel, RewardConfig{lam, true}) - d_lam) <= 1e-12);
    CHECK(std::abs(tables.representativeness(sel) - r) <= 1e-12);
  }
}

TEST_CASE("adding a frame never lowers representativeness") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.below(15);
    const auto x = oracle::random_matrix(n, 3, rng);
    auto sel = random_subset(n, rng, 0.2);
    const double before = representativeness_reward(x, sel);
    sel.push_back(rng.below(n));
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    CHECK(representativeness_reward(x, sel) >= before);
  }
}

TEST_CASE("unwindowed diversity is invariant under joint permutation") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + rng.below(10);
    const auto x = oracle::random_matrix(n, 4, rng);
    const auto sel = random_subset(n, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm.begin(), perm.end());
    Matrix px(n, 4);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t j = 0; j < 4; ++j) px(perm[t], j) = x(t, j);
    std::vector<std::size_t> psel;
    for (auto s : sel) psel.push_back(perm[s]);
    std::sort(psel.begin(), psel.end());
    CHECK(diversity_reward(px, psel, RewardConfig::unlimited()) ==
          doctest::Approx(diversity_reward(x, sel, RewardConfig::unlimited())).epsilon(1e-12));
  }
}

TEST_CASE("representativeness is 1 exactly when every frame is covered by a duplicate") {
  Matrix x(6, 2, 0.0);
  const double rows[6][2] = {{1, 0}, {1, 0}, {0, 1}, {0, 1}, {2, 2}, {1, 0}};
  for (std::size_t t = 0; t < 6; ++t)
    for (std::size_t j = 0; j < 2; ++j) x(t, j) = rows[t][j];
  const std::vector<std::size_t> cover{0, 2, 4};
  CHECK(representativeness_reward(x, cover) == 1.0);
  const std::vector<std::size_t> missing{0, 2};
  CHECK(representativeness_reward(x, missing) < 1.0);
}
