#pragma once

#include <optional>

#include "parset/measure.hpp"

namespace parset {

struct ShellQuotient {
  double value = 0.0;
  double std_error = 0.0;
};

struct SurfaceEstimate {
  std::vector<double> eps_schedule;          // strictly decreasing
  std::vector<ShellQuotient> raw_quotients;  // one per epsilon
  double extrapolated = 0.0;                 // eps -> 0 limit from the ladder
  double extrapolated_error = 0.0;
  double max_two_smallest = 0.0;             // conservative limsup surrogate
  std::uint64_t n_samples = 0;
  std::int64_t seed = 0;
};

// Geometric schedule eps0 * 2^{-k}, k = 0..levels-1; eps0 <= 0 picks r/10.
std::vector<double> default_eps_schedule(double r, double eps0 = 0.0, int levels = 5);

// (vol(r + eps) - vol(r)) / eps on one coupled sample set; nonnegative for
// every seed because the hit sets are nested. `margin` caps the allowed
// shell width when the caller has already fixed a sampling box.
ShellQuotient shell_quotient(const Scene& s, double eps, std::uint64_t n,
                             std::int64_t seed, int workers = 1,
                             std::optional<double> margin = std::nullopt);

// Shell quotients for the whole epsilon ladder from a single coupled sample
// set, extrapolated to eps -> 0 under value(eps) = L + c*eps. The max over
// the two smallest levels is reported alongside as a limsup surrogate.
SurfaceEstimate outer_content(const Scene& s, const std::vector<double>& eps_schedule,
                              std::uint64_t n, std::int64_t seed, int workers = 1);

// d * ball_volume(d, 1) * rho^{d-1}
double sphere_surface(int d, double rho);

struct RatioEstimate {
  double ratio = 0.0;
  double ci = 0.0;  // one-sigma propagated error
  VolumeEstimate volume;
  SurfaceEstimate surface;
};

// Surface-to-volume ratio of the parallel set, measured with shared samples;
// the d/r bound holds up to statistical noise on every valid scene.
RatioEstimate ratio_thm1(const Scene& s, std::uint64_t n, std::int64_t seed,
                         std::vector<double> eps_schedule = {}, int workers = 1);

namespace detail {

struct LadderFit {
  double extrapolated = 0.0;
  double std_error = 0.0;
};

// Generalized-least-squares fit of v = L + c*eps across the ladder using the
// exact covariance of nested shell counts; falls back to two-point
// extrapolation on the smallest levels when the system is degenerate.
LadderFit extrapolate_ladder(const std::vector<double>& eps_desc,
                             const std::vector<double>& shell_p, double scale,
                             std::uint64_t n);

}  // namespace detail

}  // namespace parset
