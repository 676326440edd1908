#include "parset/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "parset/rng.hpp"

namespace parset {

namespace detail {

std::vector<std::pair<std::uint64_t, std::uint64_t>> chunk_ranges(std::uint64_t n,
                                                                  int workers) {
  int w = std::clamp(workers, 1, 256);
  if (n < static_cast<std::uint64_t>(w)) w = std::max<int>(1, static_cast<int>(n));
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  std::uint64_t chunk = n / w, rem = n % w, start = 0;
  for (int i = 0; i < w; ++i) {
    std::uint64_t len = chunk + (static_cast<std::uint64_t>(i) < rem ? 1 : 0);
    out.emplace_back(start, start + len);
    start += len;
  }
  return out;
}

CoupledCounts coupled_box_counts(const Scene& s, const std::vector<double>& radii,
                                 std::uint64_t n, std::int64_t seed, int workers) {
  if (radii.empty()) throw std::invalid_argument("coupled counts: no radii");
  if (n == 0) throw std::invalid_argument("coupled counts: n must be >= 1");
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0) || !std::isfinite(radii[j]))
      throw std::invalid_argument("coupled counts: radii must be positive");
    if (j > 0 && radii[j] < radii[j - 1])
      throw std::invalid_argument("coupled counts: radii must be nondecreasing");
  }

  CoupledCounts out;
  out.n = n;
  out.box = bounding_box_at(s, radii.back());
  out.hits.assign(radii.size(), 0);
  if (out.box.volume() <= 0.0) return out;

  const int d = s.cloud.dim;
  const auto ranges = chunk_ranges(n, workers);
  const std::uint64_t useed = static_cast<std::uint64_t>(seed);

  // One bucket per radius plus an overflow bucket for misses; a sample with
  // depth D lands in the first radius >= D. Integer merges keep the result
  // independent of chunking.
  std::vector<std::vector<std::uint64_t>> buckets(
      ranges.size(), std::vector<std::uint64_t>(radii.size() + 1, 0));

  auto work = [&](std::size_t w) {
    Point x(d);
    auto& bk = buckets[w];
    for (std::uint64_t i = ranges[w].first; i < ranges[w].second; ++i) {
      SampleStream st(useed, i);
      for (int k = 0; k < d; ++k) x[k] = st.uniform(out.box.lo[k], out.box.hi[k]);
      double depth = scene_depth(s, x);
      auto it = std::lower_bound(radii.begin(), radii.end(), depth);
      ++bk[static_cast<std::size_t>(it - radii.begin())];
    }
  };

  if (ranges.size() == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(ranges.size());
    for (std::size_t w = 0; w < ranges.size(); ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  std::vector<std::uint64_t> total(radii.size() + 1, 0);
  for (const auto& bk : buckets)
    for (std::size_t b = 0; b < total.size(); ++b) total[b] += bk[b];
  std::uint64_t run = 0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    run += total[j];
    out.hits[j] = run;
  }
  return out;
}

}  // namespace detail

double ball_volume(int d, double rho) {
  if (d < 1) throw std::invalid_argument("ball_volume: d must be >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("ball_volume: rho must be positive");
  double logv = 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0) + d * std::log(rho);
  return std::exp(logv);
}

VolumeEstimate mc_volume(const Scene& s, std::uint64_t n, std::int64_t seed, int workers) {
  auto counts = detail::coupled_box_counts(s, {s.r}, n, seed, workers);
  double boxvol = counts.box.volume();
  if (boxvol <= 0.0) return {0.0, 0.0, n, seed, VolumeMethod::exact};
  double p = static_cast<double>(counts.hits[0]) / static_cast<double>(n);
  VolumeEstimate est;
  est.value = boxvol * p;
  est.std_error = boxvol * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  est.n_samples = n;
  est.seed = seed;
  est.method = VolumeMethod::monte_carlo;
  return est;
}

std::vector<VolumeEstimate> coupled_volumes(const Scene& s, const std::vector<double>& radii,
                                            std::uint64_t n, std::int64_t seed, int workers) {
  for (std::size_t j = 1; j < radii.size(); ++j)
    if (radii[j] < radii[j - 1])
      throw std::invalid_argument("coupled_volumes: radii must be nondecreasing");
  auto counts = detail::coupled_box_counts(s, radii, n, seed, workers);
  double boxvol = counts.box.volume();
  std::vector<VolumeEstimate> out;
  out.reserve(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) {
    double p = static_cast<double>(counts.hits[j]) / static_cast<double>(n);
    VolumeEstimate est;
    est.value = boxvol * p;
    est.std_error = boxvol * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    est.n_samples = n;
    est.seed = seed;
    est.method = VolumeMethod::monte_carlo;
    out.push_back(est);
  }
  return out;
}

double interval_union_length(const PointCloud& cloud, double r) {
  if (cloud.dim != 1) throw std::invalid_argument("interval_union_length: dimension must be 1");
  if (!(r > 0.0)) throw std::invalid_argument("interval_union_length: r must be positive");
  std::vector<double> centers;
  centers.reserve(cloud.points.size());
  for (const auto& p : cloud.points) centers.push_back(p[0]);
  std::sort(centers.begin(), centers.end());
  double total = 0.0;
  double lo = centers.front() - r, hi = centers.front() + r;
  for (std::size_t i = 1; i < centers.size(); ++i) {
    double a = centers[i] - r, b = centers[i] + r;
    if (a <= hi) {
      hi = std::max(hi, b);
    } else {
      total += hi - lo;
      lo = a;
      hi = b;
    }
  }
  return total + (hi - lo);
}

double two_ball_union_volume(const Point& c1, const Point& c2, double rho, int d) {
  if (static_cast<int>(c1.size()) != d || static_cast<int>(c2.size()) != d)
    throw std::invalid_argument("two_ball_union_volume: dimension mismatch");
  if (!(rho > 0.0)) throw std::invalid_argument("two_ball_union_volume: rho must be positive");
  double vol = ball_volume(d, rho);
  double delta = distance(c1, c2);
  if (delta == 0.0) return vol;
  if (delta >= 2.0 * rho) return 2.0 * vol;
  // lens = two caps of height h = rho - delta/2; cap fraction via the
  // regularized incomplete beta with x = (2 rho h - h^2) / rho^2.
  double h = rho - 0.5 * delta;
  double x = (2.0 * rho * h - h * h) / (rho * rho);
  x = std::clamp(x, 0.0, 1.0);
  double cap_fraction = 0.5 * boost::math::ibeta(0.5 * (d + 1.0), 0.5, x);
  return 2.0 * vol * (1.0 - cap_fraction);
}

VolumeEstimate grid_volume(const Scene& s, double h) {
  const int d = s.cloud.dim;
  if (d > 3) throw std::invalid_argument("grid_volume: only d <= 3 supported");
  if (!(h > 0.0)) throw std::invalid_argument("grid_volume: h must be positive");
  Box box = bounding_box(s);

  auto pass = [&](double step) {
    std::vector<int> n(d);
    std::vector<double> cell(d);
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) {
      double side = box.hi[i] - box.lo[i];
      n[i] = std::max(1, static_cast<int>(std::ceil(side / step)));
      cell[i] = side / n[i];
      total *= static_cast<std::uint64_t>(n[i]);
    }
    if (total > 200'000'000ull) throw std::invalid_argument("grid_volume: grid too fine");
    double cellvol = 1.0;
    for (int i = 0; i < d; ++i) cellvol *= cell[i];
    std::uint64_t hits = 0;
    Point x(d);
    std::vector<int> idx(d, 0);
    for (std::uint64_t k = 0; k < total; ++k) {
      std::uint64_t rem = k;
      for (int i = 0; i < d; ++i) {
        idx[i] = static_cast<int>(rem % n[i]);
        rem /= n[i];
        x[i] = box.lo[i] + (idx[i] + 0.5) * cell[i];
      }
      if (contains(s, x)) ++hits;
    }
    return std::pair<double, std::uint64_t>{cellvol * hits, total};
  };

  auto [fine, cells] = pass(h);
  auto [coarse, _] = pass(2.0 * h);
  VolumeEstimate est;
  est.value = fine;
  est.std_error = std::abs(fine - coarse);
  est.n_samples = cells;
  est.seed = 0;
  est.method = VolumeMethod::grid;
  return est;
}

}  // namespace parset
