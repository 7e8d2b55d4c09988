#include <doctest.h>

#include <vector>

#include "support.hpp"

using namespace mpot;
using mpot::testing::random_histogram;

namespace {

IntegerHistogram hist(const GridShape& shape, std::vector<std::int64_t> v) {
  return IntegerHistogram(shape, IntegerHistogram::Vector::Map(v.data(), static_cast<Eigen::Index>(v.size())));
}

}  // namespace

TEST_CASE("enumeration on hand-checked instances") {
  const GridShape line{2};
  const auto c = power_cost(line, 2);
  CHECK(oracle::enumerate_tiny(hist(line, {1, 0}), hist(line, {0, 1}), c).objective == 1);
  CHECK(oracle::enumerate_tiny(hist(line, {2, 0}), hist(line, {0, 2}), c).objective == 2);
  CHECK(oracle::enumerate_tiny(hist(line, {1, 1}), hist(line, {1, 1}), c).objective == 0);

  const GridShape sq{2, 2};
  CHECK(oracle::enumerate_tiny(hist(sq, {1, 0, 0, 0}), hist(sq, {0, 0, 0, 1}), power_cost(sq, 2)).objective == 2);
  // with p = 1 swapping across the diagonal costs 2 per unit either way
  CHECK(oracle::enumerate_tiny(hist(sq, {1, 0, 0, 1}), hist(sq, {0, 1, 1, 0}), power_cost(sq, 1)).objective == 2);
}

TEST_CASE("enumeration refuses large instances") {
  const GridShape line{2};
  const auto c = power_cost(line, 1);
  try {
    oracle::enumerate_tiny(hist(line, {4, 3}), hist(line, {3, 4}), c);
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
  const GridShape five{5};
  CHECK_THROWS_AS(oracle::enumerate_tiny(hist(five, {1, 0, 0, 0, 0}), hist(five, {0, 0, 0, 0, 1}), power_cost(five, 1)),
                  Error);
}

TEST_CASE("enumeration, shortest paths and simplex agree on tiny grids") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const GridShape shape = trial % 2 == 0 ? GridShape{2, 2} : GridShape{4};
    const int p = 1 + trial % 3;
    const auto mu = random_histogram(rng, shape, 4, 0, 3);
    const auto nu = random_histogram(rng, shape, 4, 0, 3);
    const auto cost = power_cost(shape, p);
    const auto brute = oracle::enumerate_tiny(mu, nu, cost).objective;
    for (const auto& net : {build_bipartite(mu, nu, cost), build_multipartite(mu, nu, cost)}) {
      CHECK(oracle::ssp_solve(net).objective == brute);
      const auto sol = solve(net);
      REQUIRE(sol.status == SolveStatus::Optimal);
      CHECK(sol.objective == brute);
    }
  }
}

TEST_CASE("shortest paths match the simplex on layered grid networks") {
  std::mt19937_64 rng(8);
  for (const auto& shape : {GridShape{8, 8}, GridShape{4, 4, 4}, GridShape{3, 5}}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto mu = random_histogram(rng, shape, 500);
      const auto nu = random_histogram(rng, shape, 500);
      const auto cost = power_cost(shape, 2);
      const auto layered = build_multipartite(mu, nu, cost);
      const auto ref = oracle::ssp_solve(layered).objective;
      CHECK(solve(layered).objective == ref);
      CHECK(solve(build_bipartite(mu, nu, cost)).objective == ref);
    }
  }
}
