#pragma once

#include <cstdint>
#include <vector>

#include "parset/geometry.hpp"

namespace parset {

enum class VolumeMethod { exact, monte_carlo, grid };

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::int64_t seed = 0;
  VolumeMethod method = VolumeMethod::monte_carlo;
};

// pi^{d/2} / Gamma(d/2 + 1) * rho^d, evaluated through log-gamma.
double ball_volume(int d, double rho);

// Hit-or-miss estimate over the scene's bounding box. Results are a pure
// function of (scene, n, seed); the worker count never changes them.
VolumeEstimate mc_volume(const Scene& s, std::uint64_t n, std::int64_t seed,
                         int workers = 1);

// Volumes of the parallel sets at each radius, all evaluated on one shared
// sample set drawn for the largest radius. Hit sets are nested, so the
// returned values are nondecreasing exactly, not just in expectation.
std::vector<VolumeEstimate> coupled_volumes(const Scene& s,
                                            const std::vector<double>& radii,
                                            std::uint64_t n, std::int64_t seed,
                                            int workers = 1);

// Exact total length of union [a - r, a + r] over a 1-d cloud.
double interval_union_length(const PointCloud& cloud, double r);

// Exact volume of the union of two d-balls of common radius rho, via the
// spherical-cap form of the lens (regularized incomplete beta).
double two_ball_union_volume(const Point& c1, const Point& c2, double rho, int d);

// Deterministic midpoint-grid cross-check, d <= 3. std_error reports the
// h vs 2h grid difference, not a statistical error.
VolumeEstimate grid_volume(const Scene& s, double h);

namespace detail {

struct CoupledCounts {
  std::vector<std::uint64_t> hits;  // hits[j] = #{samples with depth <= radii[j]}
  std::uint64_t n = 0;
  Box box;
};

// Shared engine for every coupled-sample estimator: uniform samples in the
// box for the largest radius, one gauge-depth evaluation per sample,
// thresholded against every radius. radii must be nondecreasing.
CoupledCounts coupled_box_counts(const Scene& s, const std::vector<double>& radii,
                                 std::uint64_t n, std::int64_t seed, int workers);

std::vector<std::pair<std::uint64_t, std::uint64_t>> chunk_ranges(std::uint64_t n,
                                                                  int workers);

}  // namespace detail

}  // namespace parset
