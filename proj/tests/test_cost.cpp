#include <doctest.h>

#include <sstream>
#include <vector>

#include "mpot/cost.hpp"
#include "mpot/error.hpp"

using namespace mpot;

TEST_CASE("power cost tables") {
  const auto c2 = power_cost(GridShape{3, 3}, 2);
  CostTable expected(3, 3);
  expected << 0, 1, 4, 1, 0, 1, 4, 1, 0;
  CHECK(c2.table(0) == expected);
  CHECK(c2.table(1) == expected);

  const auto c1 = power_cost(GridShape{2, 2}, 1);
  CostTable l1(2, 2);
  l1 << 0, 1, 1, 0;
  CHECK(c1.table(0) == l1);

  const auto big = power_cost(GridShape{512}, 2);
  CHECK(big.table(0).maxCoeff() == 261121);
  CHECK(big.table(0)(0, 511) == 511 * 511);

  CHECK_THROWS_AS(power_cost(GridShape{3}, 0), Error);
  try {
    power_cost(GridShape{1000}, 9);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}

TEST_CASE("ground cost examples") {
  const auto c = power_cost(GridShape{3, 3}, 2);
  CHECK(ground_cost(c, std::vector<Index>{0, 0}, std::vector<Index>{1, 1}) == 2);
  CHECK(ground_cost(c, std::vector<Index>{0, 2}, std::vector<Index>{2, 0}) == 8);
  for (Index x = 0; x < 9; ++x) CHECK(ground_cost(c, x, x) == 0);
  CHECK_THROWS_AS(ground_cost(c, std::vector<Index>{0, 3}, std::vector<Index>{0, 0}), Error);
  CHECK_THROWS_AS(ground_cost(c, 0, 9), Error);
}

TEST_CASE("power costs are symmetric and split along any axis path") {
  for (int p = 1; p <= 3; ++p) {
    const GridShape shape{3, 2, 3};
    const auto c = power_cost(shape, p);
    const int d = shape.rank();
    for (Index x = 0; x < shape.size(); ++x) {
      for (Index y = 0; y < shape.size(); ++y) {
        const auto direct = ground_cost(c, x, y);
        CHECK(direct == ground_cost(c, y, x));
        // every subset S of axes: move S first (x -> z), then the rest (z -> y)
        for (unsigned s = 0; s < (1u << d); ++s) {
          Index z = x;
          for (int a = 0; a < d; ++a) {
            if (s & (1u << a)) z = shape.with_coord(z, a, shape.coord(y, a));
          }
          std::int64_t split = 0;
          Index w = x;
          for (int a = 0; a < d; ++a) {
            const Index next = shape.with_coord(w, a, shape.coord(y, a));
            split += ground_cost(c, w, next);
            w = next;
          }
          CHECK(split == direct);
          CHECK(ground_cost(c, x, z) + ground_cost(c, z, y) == direct);
        }
      }
    }
  }
}

TEST_CASE("cost table files") {
  std::istringstream in(
      "# axis: 1, size: 2\n"
      "0 3\n"
      "5 0\n"
      "# axis: 0, size: 3\n"
      "0 1 2\n"
      "1 0 1\n"
      "2 1 0\n");
  const auto c = parse_cost_tables(in, GridShape{3, 2});
  CHECK(c.table(1)(0, 1) == 3);
  CHECK(c.table(1)(1, 0) == 5);
  CHECK(c.max_cost() == 2 + 5);
  CHECK(ground_cost(c, std::vector<Index>{0, 1}, std::vector<Index>{2, 0}) == 2 + 5);

  std::stringstream out;
  write_cost_tables(out, c);
  const auto back = parse_cost_tables(out, GridShape{3, 2});
  CHECK(back.table(0) == c.table(0));
  CHECK(back.table(1) == c.table(1));

  std::istringstream missing("# axis: 0, size: 3\n0 1 2\n1 0 1\n2 1 0\n");
  CHECK_THROWS_AS(parse_cost_tables(missing, GridShape{3, 2}), Error);
  std::istringstream wrong_size("# axis: 0, size: 2\n0 1\n1 0\n");
  CHECK_THROWS_AS(parse_cost_tables(wrong_size, GridShape{3}), Error);
  std::istringstream negative("# axis: 0, size: 2\n0 -1\n1 0\n");
  CHECK_THROWS_AS(parse_cost_tables(negative, GridShape{2}), Error);
}
