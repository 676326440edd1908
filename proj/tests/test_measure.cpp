#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "parset/measure.hpp"

using namespace parset;

TEST_CASE("ball volume closed forms and recursion") {
  CHECK(ball_volume(2, 1.0) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(ball_volume(1, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ball_volume(3, 1.0) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-13));
  CHECK_THROWS_AS(ball_volume(0, 1.0), std::invalid_argument);

  for (int d = 3; d <= 40; ++d) {
    double lhs = ball_volume(d, 1.0);
    double rhs = ball_volume(d - 2, 1.0) * 2.0 * M_PI / d;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  // scaling
  CHECK(ball_volume(3, 2.0) == doctest::Approx(8.0 * ball_volume(3, 1.0)).epsilon(1e-13));
}

TEST_CASE("mc_volume hits the ball oracle and is deterministic") {
  Scene s(PointCloud(2, {{0, 0}}), Ball{1.0}, 1.0);
  auto est = mc_volume(s, 1000000, 1234);
  CHECK(std::abs(est.value - M_PI) <= 4.0 * est.std_error);
  CHECK(est.value <= bounding_box(s).volume());

  auto again = mc_volume(s, 1000000, 1234);
  CHECK(est.value == again.value);
  CHECK(est.std_error == again.std_error);

  // worker count never changes the result
  auto threaded = mc_volume(s, 1000000, 1234, 4);
  CHECK(est.value == threaded.value);
}

TEST_CASE("mc_volume trivial cases") {
  Scene s(PointCloud(2, {{0, 0}}), Ball{1.0}, 1.0);
  auto est = mc_volume(s, 1, 7);
  // a single sample either hits (box volume) or misses (0)
  double boxvol = bounding_box(s).volume();
  CHECK((est.value == 0.0 || est.value == boxvol));
}

TEST_CASE("mc_volume within 4 sigma of exact oracles over 100 seeds") {
  int excursions = 0;

  Scene ball2(PointCloud(2, {{0, 0}}), Ball{1.0}, 1.0);
  for (int seed = 0; seed < 40; ++seed) {
    auto est = mc_volume(ball2, 20000, seed);
    if (std::abs(est.value - M_PI) > 4.0 * est.std_error) ++excursions;
  }

  PointCloud pair1(1, {{0.0}, {1.4}});
  Scene line(pair1, Ball{1.0}, 1.0);
  double exact1 = interval_union_length(pair1, 1.0);
  for (int seed = 0; seed < 30; ++seed) {
    auto est = mc_volume(line, 20000, seed);
    if (std::abs(est.value - exact1) > 4.0 * est.std_error) ++excursions;
  }

  Scene pair2(PointCloud(2, {{0, 0}, {1, 0}}), Ball{1.0}, 1.0);
  double exact2 = two_ball_union_volume({0, 0}, {1, 0}, 1.0, 2);
  for (int seed = 0; seed < 30; ++seed) {
    auto est = mc_volume(pair2, 20000, seed);
    if (std::abs(est.value - exact2) > 4.0 * est.std_error) ++excursions;
  }

  CHECK(excursions <= 1);
}

TEST_CASE("coupled volumes are exactly nested") {
  Scene s(PointCloud(2, {{0, 0}}), Ball{1.0}, 1.0);

  auto same = coupled_volumes(s, {1.0, 1.0}, 50000, 3);
  CHECK(same[0].value == same[1].value);

  auto pair = coupled_volumes(s, {1.0, 2.0}, 400000, 3);
  CHECK(std::abs(pair[0].value - M_PI) <= 4.0 * pair[0].std_error);
  CHECK(std::abs(pair[1].value - 4.0 * M_PI) <= 4.0 * pair[1].std_error);
  CHECK(pair[1].value >= pair[0].value);

  Scene multi(PointCloud(2, {{0, 0}, {0.7, 0.3}, {-0.5, 0.8}}), Ball{1.0}, 0.5);
  std::vector<double> radii{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  for (int seed = 0; seed < 20; ++seed) {
    auto ests = coupled_volumes(multi, radii, 5000, seed);
    for (std::size_t j = 1; j < ests.size(); ++j) CHECK(ests[j].value >= ests[j - 1].value);
  }

  CHECK_THROWS_AS(coupled_volumes(s, {2.0, 1.0}, 100, 0), std::invalid_argument);
}

TEST_CASE("interval union length") {
  CHECK(interval_union_length(PointCloud(1, {{0.0}, {3.0}}), 1.0) == doctest::Approx(4.0));
  // overlapping pair merges to [-1, 2]
  CHECK(interval_union_length(PointCloud(1, {{0.0}, {1.0}}), 1.0) == doctest::Approx(3.0));
  CHECK(interval_union_length(PointCloud(1, {{0.0}, {2.0}}), 1.0) == doctest::Approx(4.0));
  CHECK(interval_union_length(PointCloud(1, {{0.0}}), 0.25) == doctest::Approx(0.5));
  CHECK_THROWS_AS(interval_union_length(PointCloud(2, {{0., 0.}}), 1.0),
                  std::invalid_argument);
}

TEST_CASE("two-ball union volume") {
  CHECK(two_ball_union_volume({0, 0}, {3, 0}, 1.0, 2) ==
        doctest::Approx(2.0 * M_PI).epsilon(1e-13));
  CHECK(two_ball_union_volume({1, 1}, {1, 1}, 1.0, 2) == doctest::Approx(M_PI));

  // planar closed form: union = 2 pi - lens
  double expect = 2.0 * M_PI - (2.0 * M_PI / 3.0 - std::sqrt(3.0) / 2.0);
  CHECK(two_ball_union_volume({0, 0}, {1, 0}, 1.0, 2) ==
        doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(5.0548).epsilon(1e-4));

  // lens route vs planar closed form across separations
  for (double delta : {0.1, 0.5, 1.0, 1.5, 1.9}) {
    double got = two_ball_union_volume({0, 0}, {delta, 0}, 1.0, 2);
    double want = 2.0 * M_PI - oracles::planar_lens_area(1.0, delta);
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
  }

  // d = 1 agrees with the exact interval oracle
  for (double delta : {0.2, 0.8, 1.4}) {
    double got = two_ball_union_volume({0.0}, {delta}, 1.0, 1);
    double want = interval_union_length(PointCloud(1, {{0.0}, {delta}}), 1.0);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }

  // d = 3 cross-checked by Monte Carlo
  Scene s3(PointCloud(3, {{0, 0, 0}, {1.1, 0, 0}}), Ball{1.0}, 1.0);
  auto est = mc_volume(s3, 400000, 99);
  double exact3 = two_ball_union_volume({0, 0, 0}, {1.1, 0, 0}, 1.0, 3);
  CHECK(std::abs(est.value - exact3) <= 4.0 * est.std_error);
}

TEST_CASE("grid cross-check") {
  Scene s(PointCloud(2, {{0, 0}}), Ball{1.0}, 1.0);
  auto est = grid_volume(s, 0.01);
  CHECK(est.method == VolumeMethod::grid);
  CHECK(std::abs(est.value - M_PI) < 0.02);
  CHECK_THROWS_AS(grid_volume(Scene(PointCloud(4, {{0, 0, 0, 0}}), Ball{1.0}, 1.0), 0.1),
                  std::invalid_argument);
}
