#pragma once

#include <functional>
#include <optional>
#include <string>

#include "parset/gaussian.hpp"

namespace parset {

struct SweepConfig {
  std::vector<int> dims;
  std::vector<double> r_values;
  int n_scenes = 100;  // per dimension; r cycles through r_values
  int cloud_size_max = 8;
  std::uint64_t n_samples = 100000;
  std::int64_t seed = 0;
  double tolerance_sigmas = 3.0;
  double required_pass_rate = 0.99;
  int workers = 1;
};

enum class BodyKind { ball, cube, cross };

struct SweepRecord {
  int index = 0;  // scene index within its dimension block
  int d = 0;
  double r = 0.0;
  BodyKind body = BodyKind::ball;
  int cloud_size = 0;
  std::uint64_t digest = 0;  // FNV-1a of the canonical scene bytes
  double measured = 0.0;     // ratio (thm1) or Gaussian surface (thm2)
  double ci = 0.0;
  double bound = 0.0;
  double margin_sigma = 0.0;
  // thm2 only: margin against the explicit bound B(d, min(r, r_star))
  std::optional<double> explicit_margin_sigma;
  bool pass = false;
  bool skipped = false;
  std::int64_t scene_seed = 0;
};

struct SweepReport {
  std::string kind;  // "thm1" or "thm2"
  SweepConfig config;
  std::vector<SweepRecord> records;
  double pass_rate = 0.0;  // over non-skipped records
  int n_skipped = 0;
  bool pass = false;       // pass_rate >= required_pass_rate
};

// Deterministic scene generator behind both sweeps: uniform cloud in
// [-1, 1]^d, body from {ball, axis-scaled cube, cross-polytope} (thm2
// restricts to the unit ball). Reproducible from (cfg.seed, d, index).
Scene generate_sweep_scene(const SweepConfig& cfg, int d, int index, bool ball_only,
                           BodyKind* kind_out = nullptr, double* r_out = nullptr);

std::uint64_t scene_digest(const Scene& s);

// Randomized check of the surface-to-volume bound d/r across random scenes.
SweepReport thm1_sweep(const SweepConfig& cfg);

// Randomized check of the Gaussian surface bound 18 d max(sqrt d, 1/r).
SweepReport thm2_sweep(const SweepConfig& cfg);

struct MonotonicityViolation {
  std::string kind;  // which property, and oracle vs Monte Carlo
  std::size_t i = 0, j = 0;
  double delta = 0.0;
  double sigma = 0.0;
};

struct MonotonicityReport {
  std::vector<double> s_grid, t_grid;
  std::vector<std::vector<VolumeEstimate>> estimates;       // [i][j] for (s_i, t_j)
  std::optional<std::vector<std::vector<double>>> oracle;   // exact union volumes
  std::vector<MonotonicityViolation> violations;
  bool pass = false;
};

// Coupled-sample check that |sA + tK| is nondecreasing in s and t, and that
// t -> |A + tK| / t^d is nonincreasing. The t direction is exact by
// coupling; the s direction and the scale quotient are tested statistically.
// Clouds of at most two points with a ball body also get the closed-form
// union-volume oracle, checked to 1e-12.
MonotonicityReport monotonicity_check(const PointCloud& cloud, const ConvexBody& body,
                                      const std::vector<double>& s_grid,
                                      const std::vector<double>& t_grid,
                                      std::uint64_t n, std::int64_t seed,
                                      double tol_sigmas = 4.0);

struct RegionOracle {
  std::function<bool(std::span<const double>)> member;
  Box window;
  std::string description;
};

struct CertificateResult {
  bool pass = false;
  std::size_t n_target = 0;
  std::size_t n_uncovered = 0;
  std::vector<Point> witnesses;  // capped sample of uncovered cell centers
  double band = 0.0;             // coverage slack 2 h sqrt(d)
  std::vector<int> grid_shape;
};

// Grid-morphology test of r-parallelness: erode the region by the Euclidean
// r-ball on an h-grid, dilate back, and require every region cell inside the
// r-shrunk window to be covered within the discretization band. Points
// outside the window are assumed to belong to the region.
CertificateResult r_parallel_certificate(const RegionOracle& region, double r, double h,
                                         std::size_t witness_cap = 4096);

}  // namespace parset
