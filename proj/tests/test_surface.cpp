#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "parset/surface.hpp"

using namespace parset;

TEST_CASE("sphere surface closed forms") {
  CHECK(sphere_surface(2, 1.0) == doctest::Approx(2.0 * M_PI).epsilon(1e-13));
  CHECK(sphere_surface(3, 2.0) == doctest::Approx(16.0 * M_PI).epsilon(1e-13));
  CHECK(sphere_surface(1, 3.7) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("default eps schedule") {
  auto sched = default_eps_schedule(1.0);
  REQUIRE(sched.size() == 5);
  CHECK(sched[0] == doctest::Approx(0.1));
  CHECK(sched[4] == doctest::Approx(0.00625));
  CHECK_THROWS_AS(default_eps_schedule(1.0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("shell quotient") {
  Scene line(PointCloud(1, {{0.0}}), Ball{1.0}, 1.0);
  auto q = shell_quotient(line, 0.05, 200000, 5);
  CHECK(std::abs(q.value - 2.0) <= 4.0 * q.std_error);

  Scene disc(PointCloud(2, {{0, 0}}), Ball{1.0}, 1.0);
  auto q2 = shell_quotient(disc, 0.01, 1000000, 5);
  CHECK(std::abs(q2.value - M_PI * 2.01) <= 4.0 * q2.std_error);

  CHECK_THROWS_AS(shell_quotient(disc, -0.1, 100, 0), std::invalid_argument);
  CHECK_THROWS_AS(shell_quotient(disc, 0.2, 100, 0, 1, 0.1), std::invalid_argument);
}

TEST_CASE("shell quotients are nonnegative for every seed") {
  Scene s(PointCloud(2, {{0, 0}, {0.4, 0.4}}), Ball{1.0}, 0.7);
  for (int seed = 0; seed < 50; ++seed) {
    auto q = shell_quotient(s, 0.05, 2000, seed);
    CHECK(q.value >= 0.0);
  }
}

TEST_CASE("outer content extrapolates to the sphere surface") {
  for (int d : {1, 2, 3}) {
    Scene s(PointCloud(d, {Point(d, 0.0)}), Ball{1.0}, 1.0);
    auto est = outer_content(s, default_eps_schedule(1.0), 1000000, 21);
    double exact = sphere_surface(d, 1.0);
    CHECK(std::abs(est.extrapolated - exact) / exact < 0.03);
    CHECK(est.extrapolated_error > 0.0);
    CHECK(est.raw_quotients.size() == 5);
    CHECK(est.max_two_smallest > 0.0);
  }
}

TEST_CASE("outer content of two far circles is twice one circle") {
  Scene s(PointCloud(2, {{0, 0}, {3, 0}}), Ball{1.0}, 1.0);
  auto est = outer_content(s, default_eps_schedule(1.0), 1000000, 22);
  CHECK(std::abs(est.extrapolated - 4.0 * M_PI) / (4.0 * M_PI) < 0.03);
}

TEST_CASE("outer content rejects bad schedules") {
  Scene s(PointCloud(2, {{0, 0}}), Ball{1.0}, 1.0);
  CHECK_THROWS_AS(outer_content(s, {0.1}, 1000, 0), std::invalid_argument);
  CHECK_THROWS_AS(outer_content(s, {0.1, 0.2}, 1000, 0), std::invalid_argument);
}

TEST_CASE("ratio_thm1 tightness for single points") {
  // single point: the ratio equals d/r exactly in the limit
  Scene a(PointCloud(3, {{0, 0, 0}}), Ball{1.0}, 0.5);
  auto est = ratio_thm1(a, 1000000, 31);
  CHECK(std::abs(est.ratio - 6.0) / 6.0 < 0.03);

  Scene b(PointCloud(2, {{0, 0}}), Ball{1.0}, 2.0);
  auto est2 = ratio_thm1(b, 1000000, 32);
  CHECK(std::abs(est2.ratio - 1.0) < 0.03);
}

TEST_CASE("ratio_thm1 obeys the d/r bound on a two-point cloud") {
  Scene s(PointCloud(2, {{0, 0}, {0.1, 0}}), Ball{1.0}, 1.0);
  auto est = ratio_thm1(s, 400000, 33);
  CHECK(est.ratio <= 2.0 + 3.0 * est.ci);
  CHECK(est.ci > 0.0);
}

TEST_CASE("constant quotients extrapolate exactly") {
  // the d = 1 interval oracle: every shell quotient equals 2, so the fitted
  // limit must reproduce it up to rounding
  std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> shell_p(eps.size());
  double scale = 8.0;
  for (std::size_t k = 0; k < eps.size(); ++k) shell_p[k] = 2.0 * eps[k] / scale;
  auto fit = detail::extrapolate_ladder(eps, shell_p, scale, 1000000);
  CHECK(fit.extrapolated == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.std_error >= 0.0);
}

TEST_CASE("outer content is independent of the worker count") {
  Scene s(PointCloud(2, {{0, 0}, {0.5, 0.5}}), Ball{1.0}, 0.8);
  auto a = outer_content(s, default_eps_schedule(0.8), 100000, 77, 1);
  auto b = outer_content(s, default_eps_schedule(0.8), 100000, 77, 3);
  CHECK(a.extrapolated == b.extrapolated);
  for (std::size_t k = 0; k < a.raw_quotients.size(); ++k)
    CHECK(a.raw_quotients[k].value == b.raw_quotients[k].value);
}

TEST_CASE("ratio_thm1 rejects a volume consistent with zero") {
  // four far-apart specks: the union volume is ~1e-5 of the box
  Scene s(PointCloud(2, {{-1, -1}, {1, -1}, {-1, 1}, {1, 1}}), Ball{1.0}, 0.001);
  CHECK_THROWS_AS(ratio_thm1(s, 10000, 5), std::runtime_error);
}

TEST_CASE("ladder extrapolation recovers an exact linear profile") {
  // d = 2 disc: the true quotient is linear in eps, so the fit is unbiased;
  // check coverage over several seeds
  Scene s(PointCloud(2, {{0, 0}}), Ball{1.0}, 1.0);
  int misses = 0;
  for (int seed = 0; seed < 20; ++seed) {
    auto est = outer_content(s, default_eps_schedule(1.0), 50000, seed);
    if (std::abs(est.extrapolated - 2.0 * M_PI) > 4.0 * est.extrapolated_error) ++misses;
  }
  CHECK(misses <= 1);
}
