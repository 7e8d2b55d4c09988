#include <doctest.h>

#include <vector>

#include "support.hpp"

using namespace mpot;
using mpot::testing::random_histogram;
using mpot::testing::random_network;

TEST_CASE("block search pricing") {
  SUBCASE("no negative arc means optimal") {
    const std::vector<std::int64_t> rc{0, 3, 1, 0, 7};
    BlockSearch search(rc.size(), 2);
    CHECK_FALSE(search.next([&](std::size_t e) { return rc[e]; }).has_value());
  }
  SUBCASE("a single negative arc is found from any start") {
    for (std::size_t pos = 0; pos < 9; ++pos) {
      std::vector<std::int64_t> rc(9, 2);
      rc[pos] = -1;
      BlockSearch search(rc.size(), 3);
      // move the scan start around before the real query
      std::vector<std::int64_t> shifted(9, 1);
      shifted[(pos + 4) % 9] = -1;
      (void)search.next([&](std::size_t e) { return shifted[e]; });
      const auto hit = search.next([&](std::size_t e) { return rc[e]; });
      REQUIRE(hit.has_value());
      CHECK(*hit == pos);
    }
  }
  SUBCASE("most negative within the block wins") {
    const std::vector<std::int64_t> rc{0, -1, 0, -3, 5, 5, -10, 0};
    BlockSearch search(rc.size(), 4);
    const auto hit = search.next([&](std::size_t e) { return rc[e]; });
    REQUIRE(hit.has_value());
    CHECK(*hit == 3);  // -10 sits in the next block
    CHECK(search.position() == 4);
    const auto again = search.next([&](std::size_t e) { return rc[e]; });
    REQUIRE(again.has_value());
    CHECK(*again == 6);
  }
  SUBCASE("default block size") {
    CHECK(BlockSearch::default_block_size(65536) == 256);
    CHECK(BlockSearch::default_block_size(10) == 4);
    CHECK(BlockSearch::default_block_size(0) == 1);
  }
}

TEST_CASE("single arc instance") {
  FlowNetwork net;
  net.node_count = 2;
  net.add_arc(0, 1, 5);
  net.supply = {1, -1};
  const auto sol = solve(net);
  CHECK(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == 5);
  CHECK(sol.flow == std::vector<std::int64_t>{1});
  CHECK(check_certificates(net, sol).ok());
}

TEST_CASE("diagonal move on a 2x2 bipartite network") {
  const GridShape s{2, 2};
  const IntegerHistogram mu(s, IntegerHistogram::Vector::Map(std::vector<std::int64_t>{1, 0, 0, 0}.data(), 4));
  const IntegerHistogram nu(s, IntegerHistogram::Vector::Map(std::vector<std::int64_t>{0, 0, 0, 1}.data(), 4));
  const auto net = build_bipartite(mu, nu, power_cost(s, 2));
  const auto sol = solve(net);
  CHECK(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == 2);
  CHECK(check_certificates(net, sol).ok());
}

TEST_CASE("infeasible networks are reported through the status") {
  FlowNetwork net;
  net.node_count = 3;
  net.add_arc(0, 1, 1);
  net.supply = {2, 0, -2};  // node 2 is unreachable
  const auto sol = solve(net);
  CHECK(sol.status == SolveStatus::Infeasible);
  CHECK_THROWS_AS(oracle::ssp_solve(net), Error);

  FlowNetwork unbalanced;
  unbalanced.node_count = 2;
  unbalanced.add_arc(0, 1, 1);
  unbalanced.supply = {2, -1};
  CHECK_THROWS_AS(solve(unbalanced), Error);
}

TEST_CASE("random small networks agree with successive shortest paths") {
  std::mt19937_64 rng(2024);
  int feasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto net = random_network(rng, 8, 20, 20, 9);
    SolverOptions opts;
    opts.validate_each_pivot = true;
    opts.block_size = 1 + trial % 5;
    const auto sol = solve(net, opts);
    try {
      const auto ref = oracle::ssp_solve(net);
      ++feasible;
      REQUIRE(sol.status == SolveStatus::Optimal);
      CHECK(sol.objective == ref.objective);
      CHECK(check_certificates(net, sol).ok());
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Infeasible);
      CHECK(sol.status == SolveStatus::Infeasible);
    }
  }
  CHECK(feasible > 20);
}

TEST_CASE("denser random networks keep a valid basis at every pivot") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int nodes = 10 + trial % 21;
    auto net = random_network(rng, nodes, nodes * 4, 50, 30);
    // a zero-cost-free Hamiltonian cycle keeps every instance feasible
    for (int u = 0; u < nodes; ++u) net.add_arc(u, (u + 1) % nodes, 100);
    SolverOptions opts;
    opts.validate_each_pivot = true;
    const auto sol = solve(net, opts);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == oracle::ssp_solve(net).objective);
    const auto cert = check_certificates(net, sol);
    CHECK(cert.dual_feasible);
    CHECK(cert.complementary_slackness);
    CHECK(cert.conservation);
    CHECK(cert.objective_matches);
  }
}

TEST_CASE("grid instances with many degenerate pivots") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const GridShape shape{6, 5};
    // sparse histograms produce many zero-supply nodes and ties
    const auto mu = random_histogram(rng, shape, 60, 0, 2);
    const auto nu = random_histogram(rng, shape, 60, 0, 2);
    for (const bool bip : {false, true}) {
      const auto net = bip ? build_bipartite(mu, nu, power_cost(shape, 2)) : build_multipartite(mu, nu, power_cost(shape, 2));
      SolverOptions opts;
      opts.validate_each_pivot = true;
      const auto sol = solve(net, opts);
      REQUIRE(sol.status == SolveStatus::Optimal);
      CHECK(check_certificates(net, sol).ok());
      CHECK(sol.objective == oracle::ssp_solve(net).objective);
    }
  }
}
