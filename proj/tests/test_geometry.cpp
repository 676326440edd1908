#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "parset/geometry.hpp"
#include "parset/rng.hpp"

using namespace parset;

namespace {

ConvexBody unit_cube_h(int d) {
  HPolytope hp;
  for (int i = 0; i < d; ++i)
    for (double s : {1.0, -1.0}) {
      Halfspace hs;
      hs.normal.assign(d, 0.0);
      hs.normal[i] = s;
      hs.offset = 1.0;
      hp.halfspaces.push_back(hs);
    }
  return hp;
}

ConvexBody cross_polytope_v(int d, double scale = 1.0) {
  VPolytope vp;
  for (int i = 0; i < d; ++i)
    for (double s : {1.0, -1.0}) {
      Point v(d, 0.0);
      v[i] = s * scale;
      vp.vertices.push_back(v);
    }
  return vp;
}

// rejection sampler for a point of K (gauge <= 1)
Point sample_in_body(const ConvexBody& body, int d, SampleStream& st) {
  Point u(d, 0.0);
  double lo = 0.0, hi = 0.0;
  Point x(d);
  for (;;) {
    for (int i = 0; i < d; ++i) {
      u.assign(d, 0.0);
      u[i] = -1.0;
      lo = -support(body, u);
      u[i] = 1.0;
      hi = support(body, u);
      x[i] = st.uniform(lo, hi);
    }
    if (gauge(body, x) <= 1.0) return x;
  }
}

}  // namespace

TEST_CASE("gauge closed forms") {
  Ball b1{1.0};
  Point v{2.0, 0.0};
  CHECK(gauge(ConvexBody{b1}, v) == doctest::Approx(2.0));

  ConvexBody cube = unit_cube_h(2);
  CHECK(gauge(cube, v) == doctest::Approx(2.0));

  Point zero{0.0, 0.0};
  CHECK(gauge(cube, zero) == 0.0);
  CHECK(gauge(ConvexBody{b1}, zero) == 0.0);
  CHECK(gauge(cross_polytope_v(2), zero) == doctest::Approx(0.0));
}

TEST_CASE("gauge of a cross-polytope matches the l1 norm") {
  SampleStream st(7, 0);
  for (int d : {2, 3}) {
    ConvexBody cross = cross_polytope_v(d);
    for (int k = 0; k < 50; ++k) {
      Point v(d);
      double l1 = 0.0;
      for (int i = 0; i < d; ++i) {
        v[i] = st.uniform(-2.0, 2.0);
        l1 += std::abs(v[i]);
      }
      CHECK(gauge(cross, v) == doctest::Approx(l1).epsilon(1e-9));
    }
  }
}

TEST_CASE("support closed forms") {
  Point e1{1.0, 0.0}, e2{0.0, 1.0};
  CHECK(support(ConvexBody{Ball{2.0}}, e1) == doctest::Approx(2.0));

  VPolytope sq;
  sq.vertices = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  Point diag{1.0, 1.0};
  CHECK(support(ConvexBody{sq}, diag) == doctest::Approx(2.0));

  CHECK(support(unit_cube_h(2), e2) == doctest::Approx(1.0));
  CHECK(support(unit_cube_h(2), diag) == doctest::Approx(2.0));
}

TEST_CASE("gauge is positively homogeneous") {
  SampleStream st(11, 0);
  std::vector<ConvexBody> bodies{Ball{0.7}, unit_cube_h(3), cross_polytope_v(3, 1.3)};
  for (const auto& body : bodies) {
    for (int k = 0; k < 40; ++k) {
      Point v(3);
      for (auto& c : v) c = st.uniform(-2.0, 2.0);
      double t = st.uniform(0.0, 3.0);
      Point tv = v;
      for (auto& c : tv) c *= t;
      double g = gauge(body, v);
      CHECK(gauge(body, tv) == doctest::Approx(t * g).epsilon(1e-12));
    }
  }
}

TEST_CASE("gauge-support duality on random directions") {
  SampleStream st(13, 0);
  std::vector<ConvexBody> bodies{Ball{1.0}, unit_cube_h(2), cross_polytope_v(2)};
  for (const auto& body : bodies) {
    // inside: v with gauge < 1 never beats the support in any direction
    Point w(2);
    for (auto& c : w) c = st.uniform(-1.0, 1.0);
    double g = gauge(body, w);
    if (g > 0.0)
      for (auto& c : w) c *= 0.999 / g;
    for (int k = 0; k < 1000; ++k) {
      double a = st.uniform(0.0, 2.0 * M_PI);
      Point u{std::cos(a), std::sin(a)};
      CHECK(dot(w, u) <= support(body, u) + 1e-9);
    }
    // outside with margin: some sampled direction separates
    Point far(2);
    for (auto& c : far) c = st.uniform(0.2, 1.0);
    double gf = gauge(body, far);
    for (auto& c : far) c *= 1.5 / gf;
    bool separated = false;
    for (int k = 0; k < 1000 && !separated; ++k) {
      double a = st.uniform(0.0, 2.0 * M_PI);
      Point u{std::cos(a), std::sin(a)};
      separated = dot(far, u) > support(body, u) + 1e-12;
    }
    CHECK(separated);
  }
}

TEST_CASE("contains on simple scenes") {
  Scene one(PointCloud(3, {{0, 0, 0}}), Ball{1.0}, 1.0);
  CHECK(contains(one, Point{0.5, 0.0, 0.0}));
  CHECK_FALSE(contains(one, Point{1.001, 0.0, 0.0}));

  Scene two(PointCloud(1, {{0.0}, {3.0}}), Ball{1.0}, 1.0);
  CHECK(contains(two, Point{2.0}));
  CHECK_FALSE(contains(two, Point{1.5}));
}

TEST_CASE("contains holds at a + r k for sampled k in K") {
  SampleStream st(17, 0);
  std::vector<ConvexBody> bodies{Ball{1.0}, unit_cube_h(2), cross_polytope_v(2)};
  for (const auto& body : bodies) {
    Scene s(PointCloud(2, {{0.3, -0.4}, {1.0, 0.9}}), body, 0.8);
    for (int k = 0; k < 200; ++k) {
      Point kk = sample_in_body(s.body, 2, st);
      const Point& a = s.cloud.points[k % 2];
      Point x{a[0] + s.r * kk[0], a[1] + s.r * kk[1]};
      CHECK(contains(s, x));
    }
  }
}

TEST_CASE("bounding boxes") {
  Scene s(PointCloud(2, {{0, 0}}), Ball{1.0}, 2.0);
  Box b = bounding_box(s);
  CHECK(b.lo[0] == doctest::Approx(-2.0));
  CHECK(b.hi[1] == doctest::Approx(2.0));

  Scene s2(PointCloud(2, {{0, 0}, {1, 0}}), Ball{1.0}, 1.0);
  Box b2 = bounding_box(s2);
  CHECK(b2.lo[0] == doctest::Approx(-1.0));
  CHECK(b2.hi[0] == doctest::Approx(2.0));
  CHECK(b2.lo[1] == doctest::Approx(-1.0));
  CHECK(b2.hi[1] == doctest::Approx(1.0));

  Box b3 = bounding_box(s2, 0.5);
  CHECK(b3.lo[0] == doctest::Approx(-1.5));
  CHECK(b3.hi[0] == doctest::Approx(2.5));
}

TEST_CASE("bounding box contains every accepted point") {
  SampleStream st(23, 0);
  std::vector<ConvexBody> bodies{Ball{1.2}, unit_cube_h(2), cross_polytope_v(2, 0.7)};
  for (const auto& body : bodies) {
    Scene s(PointCloud(2, {{-0.5, 0.2}, {0.8, -0.3}}), body, 0.9);
    Box box = bounding_box(s);
    // sample from a larger box; anything the scene accepts must be inside
    for (int k = 0; k < 2000; ++k) {
      Point x{st.uniform(box.lo[0] - 1.0, box.hi[0] + 1.0),
              st.uniform(box.lo[1] - 1.0, box.hi[1] + 1.0)};
      if (contains(s, x)) CHECK(box.contains(x));
    }
  }
}

TEST_CASE("cloud deduplication and validation") {
  PointCloud c(2, {{1, 2}, {1, 2}, {3, 4}});
  CHECK(c.points.size() == 2);
  CHECK_THROWS_AS(PointCloud(2, {}), std::invalid_argument);
  CHECK_THROWS_AS(PointCloud(2, {{1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(PointCloud(2, {{1.0, std::nan("")}}), std::invalid_argument);
}

TEST_CASE("body validation") {
  // unbounded H-polytope: single halfspace
  HPolytope open;
  open.halfspaces.push_back({{1.0, 0.0}, 1.0});
  CHECK_THROWS_AS(Scene(PointCloud(2, {{0, 0}}), open, 1.0), std::invalid_argument);

  // origin on the hull boundary
  VPolytope flat;
  flat.vertices = {{0, 0}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(Scene(PointCloud(2, {{0, 0}}), flat, 1.0), std::invalid_argument);

  // nonpositive offset: origin not interior
  HPolytope bad;
  bad.halfspaces.push_back({{1.0, 0.0}, -1.0});
  bad.halfspaces.push_back({{-1.0, 0.0}, 3.0});
  bad.halfspaces.push_back({{0.0, 1.0}, 1.0});
  bad.halfspaces.push_back({{0.0, -1.0}, 1.0});
  CHECK_THROWS_AS(Scene(PointCloud(2, {{0, 0}}), bad, 1.0), std::invalid_argument);

  CHECK_THROWS_AS(Scene(PointCloud(2, {{0, 0}}), Ball{0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Scene(PointCloud(2, {{0, 0}}), Ball{1.0}, -1.0), std::invalid_argument);

  // dimension mismatch between body and cloud
  CHECK_THROWS_AS(Scene(PointCloud(3, {{0, 0, 0}}), unit_cube_h(2), 1.0),
                  std::invalid_argument);
}

TEST_CASE("gauge and support reject mismatched dimensions") {
  ConvexBody cube = unit_cube_h(2);
  Point v{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(gauge(cube, v), std::invalid_argument);
  CHECK_THROWS_AS(support(cube, v), std::invalid_argument);
}
