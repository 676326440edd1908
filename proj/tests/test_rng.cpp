#include <doctest.h>

#include <cmath>

#include "parset/rng.hpp"

using namespace parset;

TEST_CASE("substreams are deterministic and independent of each other") {
  SampleStream a(42, 7);
  SampleStream b(42, 7);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

  SampleStream c(42, 8);
  SampleStream d(43, 7);
  CHECK(SampleStream(42, 7).next_u64() != c.next_u64());
  CHECK(SampleStream(42, 7).next_u64() != d.next_u64());
}

TEST_CASE("uniform and normal draws have sane moments") {
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    SampleStream st(5, i);
    double u = st.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sq += u * u;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.03));

  double nsum = 0.0, nsq = 0.0;
  for (int i = 0; i < n; ++i) {
    SampleStream st(9, i);
    double z = st.normal();
    nsum += z;
    nsq += z * z;
  }
  CHECK(nsum / n == doctest::Approx(0.0).epsilon(0.02));
  CHECK(std::abs(nsum / n) < 0.02);
  CHECK(nsq / n == doctest::Approx(1.0).epsilon(0.03));
}
