#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "support.hpp"

using namespace mpot;
using mpot::testing::as_real;
using mpot::testing::random_histogram;

namespace {

TransportOptions with(Method m, bool plan = false) {
  TransportOptions o;
  o.method = m;
  o.want_plan = plan;
  return o;
}

void check_plan_marginals(const TransportPlan& plan, const IntegerHistogram& mu, const IntegerHistogram& nu) {
  const auto src = source_marginal(plan);
  const auto dst = target_marginal(plan);
  for (Index x = 0; x < mu.size(); ++x) {
    CHECK(src[static_cast<std::size_t>(x)] == Rational(mu[x]));
    CHECK(dst[static_cast<std::size_t>(x)] == Rational(nu[x]));
  }
  for (const auto& e : plan.entries) CHECK(e.mass >= 0);
}

}  // namespace

TEST_CASE("wasserstein examples") {
  const auto same = from_dense(GridShape{3, 3}, std::vector<double>(9, 1.0));
  const auto zero = wasserstein(same, same, 2);
  CHECK(zero.cost == 0);
  CHECK(zero.distance == 0.0);
  CHECK(zero.total == kDefaultTargetTotal);

  const auto mu = from_dense(GridShape{2, 2}, std::vector<double>{1, 0, 0, 0});
  const auto nu = from_dense(GridShape{2, 2}, std::vector<double>{0, 0, 0, 1});
  for (const auto m : {Method::Bipartite, Method::Multipartite}) {
    auto opts = with(m);
    opts.target_total = 1;
    const auto r = wasserstein(mu, nu, 2, opts);
    CHECK(r.cost == 2);
    CHECK(r.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  auto spaced = with(Method::Multipartite);
  spaced.grid_spacing = 0.5;
  CHECK(wasserstein(mu, nu, 2, spaced).distance == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(wasserstein(mu, nu, 1).distance == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(wasserstein(mu, from_dense(GridShape{4}, std::vector<double>{1, 0, 0, 0}), 2), Error);
  CHECK_THROWS_AS(wasserstein(mu, nu, 0), Error);
}

TEST_CASE("emd with an arbitrary separable cost") {
  const GridShape line{3};
  CostTable t(3, 3);
  t << 0, 2, 9, 2, 0, 3, 9, 3, 0;
  const SeparableCost c(line, {t});
  const auto mu = from_dense(line, std::vector<double>{1, 0, 0});
  const auto nu = from_dense(line, std::vector<double>{0, 0, 1});
  CHECK(emd(mu, nu, c) == doctest::Approx(9.0));
  // the layered graph has a single stage, so no shortcut through bin 1
  CHECK(emd(mu, nu, c, with(Method::Bipartite)) == doctest::Approx(9.0));
  CHECK(emd(mu, mu, c) == 0.0);
}

TEST_CASE("both constructions give the same optimum on 2-D grids") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    const GridShape shape{8, 8};
    const auto mu = random_histogram(rng, shape, 1000);
    const auto nu = random_histogram(rng, shape, 1000);
    const auto cost = power_cost(shape, 2);
    const auto bip = optimal_transport(mu, nu, cost, with(Method::Bipartite));
    const auto mul = optimal_transport(mu, nu, cost, with(Method::Multipartite));
    CHECK(bip.cost == mul.cost);
  }
}

TEST_CASE("both constructions give the same optimum on 3-D grids") {
  std::mt19937_64 rng(321);
  for (int trial = 0; trial < 20; ++trial) {
    const GridShape shape{4, 4, 4};
    const auto mu = random_histogram(rng, shape, 1000);
    const auto nu = random_histogram(rng, shape, 1000);
    const int p = 1 + trial % 3;
    const auto cost = power_cost(shape, p);
    CHECK(optimal_transport(mu, nu, cost, with(Method::Bipartite)).cost ==
          optimal_transport(mu, nu, cost, with(Method::Multipartite)).cost);
  }
}

TEST_CASE("plan to flows on a hand example") {
  // one unit from (0,0) to (1,1) on a 2x2 grid: first along axis 0, then axis 1
  IntegerPlan plan{GridShape{2, 2}, {{0, 3, 1}}};
  const auto flows = plan_to_flows(plan);
  REQUIRE(flows.families.size() == 2);
  REQUIRE(flows.families[0].size() == 1);
  CHECK(flows.families[0][0].from == 0);
  CHECK(flows.families[0][0].to == 1);
  REQUIRE(flows.families[1].size() == 1);
  CHECK(flows.families[1][0].from == 2);  // (1,0)
  CHECK(flows.families[1][0].to == 1);
  CHECK(flow_cost(flows, power_cost(GridShape{2, 2}, 2)) == 2);

  IntegerPlan bad{GridShape{2, 2}, {{0, 4, 1}}};
  CHECK_THROWS_AS(plan_to_flows(bad), Error);
}

TEST_CASE("flows to plan on a hand example") {
  // 1-D grid of 3: one family, the plan is the family itself
  FlowChart line{GridShape{3}, {{{0, 2, 2}, {1, 1, 1}}}};
  const auto p = flows_to_plan(line);
  REQUIRE(p.entries.size() == 2);
  CHECK(p.entries[0].source == 0);
  CHECK(p.entries[0].target == 2);
  CHECK(p.entries[0].mass == 2);

  // two units split at (1,0): gluing spreads each source proportionally
  const GridShape sq{2, 2};
  FlowChart split{sq, {{{0, 1, 1}, {2, 1, 1}}, {{2, 0, 1}, {2, 1, 1}}}};
  const auto q = flows_to_plan(split);
  const auto src = source_marginal(q);
  const auto dst = target_marginal(q);
  CHECK(src[0] == 1);
  CHECK(src[2] == 1);
  CHECK(dst[2] == 1);
  CHECK(dst[3] == 1);
  for (const auto& e : q.entries) CHECK(e.mass == Rational(1, 2));

  FlowChart broken{sq, {{{0, 1, 2}}, {{2, 0, 1}}}};
  try {
    flows_to_plan(broken);
    FAIL("expected inconsistent flows");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentFlows);
  }
}

TEST_CASE("flow cost of a marginalized plan equals the plan cost") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<Index> bin(0, 15);
  std::uniform_int_distribution<std::int64_t> mass(1, 20);
  const GridShape shape{4, 4};
  for (int trial = 0; trial < 100; ++trial) {
    IntegerPlan plan{shape, {}};
    for (int k = 0; k < 12; ++k) plan.entries.push_back({bin(rng), bin(rng), mass(rng)});
    for (int p = 1; p <= 3; ++p) {
      const auto cost = power_cost(shape, p);
      const auto flows = plan_to_flows(plan);
      CHECK(flow_cost(flows, cost) == plan_cost(plan, cost));
      CHECK(source_marginal(flows) == source_marginal(plan));
      CHECK(target_marginal(flows) == target_marginal(plan));
    }
  }
}

TEST_CASE("gluing random flow charts preserves marginals and cost") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Index> bin(0, 26);
  std::uniform_int_distribution<std::int64_t> mass(1, 9);
  const GridShape shape{3, 3, 3};
  for (int trial = 0; trial < 50; ++trial) {
    IntegerPlan plan{shape, {}};
    for (int k = 0; k < 10; ++k) plan.entries.push_back({bin(rng), bin(rng), mass(rng)});
    const auto flows = plan_to_flows(plan);
    const auto glued = flows_to_plan(flows);
    const auto rat = to_rational(plan);
    CHECK(source_marginal(glued) == source_marginal(rat));
    CHECK(target_marginal(glued) == target_marginal(rat));
    // the glued plan moves mass along the same per-axis flows
    const auto cost = power_cost(shape, 2);
    CHECK(plan_cost(glued, cost) == Rational(flow_cost(flows, cost)));
    const auto again = plan_to_flows(glued);
    for (std::size_t i = 0; i < flows.families.size(); ++i) {
      REQUIRE(again.families[i].size() == flows.families[i].size());
      for (std::size_t k = 0; k < flows.families[i].size(); ++k) {
        CHECK(again.families[i][k].from == flows.families[i][k].from);
        CHECK(again.families[i][k].to == flows.families[i][k].to);
        CHECK(again.families[i][k].value == Rational(flows.families[i][k].value));
      }
    }
  }
}

TEST_CASE("recovered plans are feasible and optimal") {
  std::mt19937_64 rng(19);
  for (const auto& shape : {GridShape{5, 5}, GridShape{3, 3, 3}}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto mu = random_histogram(rng, shape, 300);
      const auto nu = random_histogram(rng, shape, 300);
      const auto cost = power_cost(shape, 2);
      const auto mul = optimal_transport(mu, nu, cost, with(Method::Multipartite, true));
      const auto bip = optimal_transport(mu, nu, cost, with(Method::Bipartite, true));
      REQUIRE(mul.plan.has_value());
      REQUIRE(bip.plan.has_value());
      check_plan_marginals(*mul.plan, mu, nu);
      check_plan_marginals(*bip.plan, mu, nu);
      CHECK(plan_cost(*mul.plan, cost) == Rational(mul.cost));
      CHECK(plan_cost(*bip.plan, cost) == Rational(bip.cost));
    }
  }
}

TEST_CASE("flow chart of a solve reproduces the objective") {
  std::mt19937_64 rng(3);
  const GridShape shape{6, 6};
  const auto mu = random_histogram(rng, shape, 400);
  const auto nu = random_histogram(rng, shape, 400);
  const auto cost = power_cost(shape, 1);
  const auto net = build_multipartite(mu, nu, cost);
  const auto sol = solve(net);
  const auto flows = flow_chart_from_solution(net, sol);
  CHECK(flow_cost(flows, cost) == sol.objective);
  const auto src = source_marginal(flows);
  const auto dst = target_marginal(flows);
  for (Index x = 0; x < shape.size(); ++x) {
    CHECK(src[static_cast<std::size_t>(x)] == mu[x]);
    CHECK(dst[static_cast<std::size_t>(x)] == nu[x]);
  }
}

TEST_CASE("plan CSV output") {
  TransportPlan plan{GridShape{2, 2}, {{0, 3, Rational(1, 3)}}};
  std::ostringstream out;
  write_plan_csv(out, plan);
  CHECK(out.str() == "source,target,mass\n0 0,1 1,1/3\n");
}

TEST_CASE("wasserstein behaves as a metric") {
  std::mt19937_64 rng(2);
  const GridShape shape{5, 5};
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = as_real(random_histogram(rng, shape, 1000));
    const auto b = as_real(random_histogram(rng, shape, 1000));
    const auto c = as_real(random_histogram(rng, shape, 1000));
    for (const int p : {1, 2}) {
      const double ab = wasserstein(a, b, p).distance;
      const double ba = wasserstein(b, a, p).distance;
      const double bc = wasserstein(b, c, p).distance;
      const double ac = wasserstein(a, c, p).distance;
      CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
      CHECK(wasserstein(a, a, p).distance == 0.0);
      CHECK(ac <= ab + bc + 1e-9);
    }
  }
}
