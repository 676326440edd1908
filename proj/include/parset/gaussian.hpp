#pragma once

#include <functional>
#include <string>

#include "parset/surface.hpp"

namespace parset {

// m_p = integral_0^inf e^{-t^2/2} t^p dt = 2^{(p-1)/2} Gamma((p+1)/2), p > -1.
double gaussian_moment(double p);

struct MomentTable {
  std::vector<double> values;  // values[p] = m_p for integer p = 0..p_max

  static MomentTable build(int p_max);
};

enum class GaussianMethod { direct_mc, radial };

struct GaussianEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::int64_t seed = 0;
  GaussianMethod method = GaussianMethod::direct_mc;
};

// A nested radial family {x : depth(x) <= rho}; rho = base_radius recovers
// the set of interest. Scenes use the gauge distance to the cloud; a closed
// halfspace is presented as the r-parallel family of a deeper halfspace.
struct DepthField {
  int dim = 0;
  double base_radius = 0.0;
  std::function<double(std::span<const double>)> depth;
};

DepthField scene_field(const Scene& s);
DepthField halfspace_field(Point normal, double offset, double r);

// Fraction of standard-normal samples inside the set; deterministic per
// (seed, n) and independent of the worker count.
GaussianEstimate gaussian_measure_mc(const DepthField& f, std::uint64_t n,
                                     std::int64_t seed, int workers = 1);
GaussianEstimate gaussian_measure_mc(const Scene& s, std::uint64_t n,
                                     std::int64_t seed, int workers = 1);

struct RadialGrid {
  double t_max = 0.0;       // <= 0 picks sqrt(d) + 10
  int initial_cells = 64;   // uniform pre-split before adaptive refinement
  double rel_tol = 1e-9;
};

// (2 pi)^{-d/2} integral_0^inf t e^{-t^2/2} |S cap tB| dt for a set given by
// its radial volume profile t -> |S cap tB|. The profile must be
// nonnegative, nondecreasing, and bounded by the ball volume.
double gaussian_measure_radial(const std::function<double(double)>& volume_profile,
                               int d, const RadialGrid& grid = {});

// Coupled finite differences (gamma(A_{r+eps}) - gamma(A_r)) / eps on shared
// normal samples, extrapolated like outer_content.
SurfaceEstimate gaussian_surface_fd(const DepthField& f,
                                    const std::vector<double>& eps_schedule,
                                    std::uint64_t n, std::int64_t seed,
                                    int workers = 1);
SurfaceEstimate gaussian_surface_fd(const Scene& s,
                                    const std::vector<double>& eps_schedule,
                                    std::uint64_t n, std::int64_t seed,
                                    int workers = 1);

// Threshold radius d^{-1/2} / (2 sqrt(e)).
double r_star(int d);

// 18 d max(sqrt(d), 1/r)
double theorem2_bound(int d, double r);

enum class Regime { below_r_star, above_r_star };

struct BoundReport {
  int d = 0;
  double r = 0.0;
  double explicit_bound = 0.0;      // B(d, r)
  double theorem_bound = 0.0;       // 18 d max(sqrt d, 1/r)
  double jog_gaussian = 0.0;
  double jog_lebesgue_factor = 0.0;
  double r_star = 0.0;
  double sum_term = 0.0;            // 2e-bounded sum, evaluated at min(r, r_star)
  Regime regime = Regime::below_r_star;
};

// B(d, r) = (d/r) (1/m_{d+1}) sum_i C(d,i) m_{i+1} (2r)^{d-i}, term-by-term
// in log space with compensated summation; valid to d = 200 and beyond.
BoundReport explicit_bound(int d, double r);

struct StirlingBracket {
  double lower = 0.0;  // sqrt(2 pi x) x^x e^{-x}
  double gamma = 0.0;  // Gamma(x + 1)
  double upper = 0.0;  // 2 * lower
};

// Valid on x in [1, inf) and x = 1/2.
StirlingBracket stirling_gamma_bounds(double x);

struct ChainCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct ChainLedger {
  std::vector<ChainCheck> checks;
  bool all_pass = false;
};

// Numerically verifies, for r <= r_star(d), every displayed inequality of
// the explicit-bound derivation: the binomial bound per index, the
// Stirling-reduced sum against 2e, the factorial tail against e, and the
// final B(d, r) <= 2 e d / r.
ChainLedger bound_chain_check(int d, double r);

struct JogBounds {
  double lebesgue_factor = 0.0;  // d 2^{2d-1}
  double gaussian_bound = 0.0;   // 2^{2d-1} d^2 3^d max(1, 1/r)
};

JogBounds jog_bounds(int d, double r);

}  // namespace parset
