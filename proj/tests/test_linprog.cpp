#include <doctest.h>

#include "parset/linprog.hpp"

using namespace parset;

TEST_CASE("basic standard-form LPs") {
  // min x + y s.t. x + y = 1
  auto r = solve_standard_lp({{1.0, 1.0}}, {1.0}, {1.0, 1.0});
  CHECK(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(1.0));

  // min x s.t. x - y = 2, y free via two constraints -> pick x = 2, y = 0
  auto r2 = solve_standard_lp({{1.0, -1.0}}, {2.0}, {1.0, 0.0});
  CHECK(r2.status == LpStatus::optimal);
  CHECK(r2.objective == doctest::Approx(2.0));

  // infeasible: x + y = -1 with x, y >= 0 and a second contradicting row
  auto r3 = solve_standard_lp({{1.0, 1.0}, {1.0, 1.0}}, {1.0, 2.0}, {1.0, 1.0});
  CHECK(r3.status == LpStatus::infeasible);

  // unbounded: min -x s.t. x - y = 0
  auto r4 = solve_standard_lp({{1.0, -1.0}}, {0.0}, {-1.0, 0.0});
  CHECK(r4.status == LpStatus::unbounded);
}

TEST_CASE("negative right-hand sides are handled") {
  // min x + y s.t. -x - y = -3  (row gets flipped internally)
  auto r = solve_standard_lp({{-1.0, -1.0}}, {-3.0}, {1.0, 1.0});
  CHECK(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(3.0));
}

TEST_CASE("degenerate equality constraints") {
  // x1 + x2 = 1 duplicated; redundant rows must not break phase 2
  auto r = solve_standard_lp({{1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0}, {2.0, 1.0});
  CHECK(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(1.0));
}
