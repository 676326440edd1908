#include "parset/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "parset/rng.hpp"

namespace parset {

namespace {

constexpr double kLn2 = 0.6931471805599453094;

double log_moment(double p) {
  return 0.5 * (p - 1.0) * kLn2 + std::lgamma(0.5 * (p + 1.0));
}

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

struct KahanSum {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// Shared normal-sample counting for the Gaussian estimators; mirrors the
// box-sampling engine in measure.
std::vector<std::uint64_t> coupled_gauss_counts(const DepthField& f,
                                                const std::vector<double>& radii,
                                                std::uint64_t n, std::int64_t seed,
                                                int workers) {
  if (radii.empty() || n == 0) throw std::invalid_argument("gauss counts: empty input");
  for (std::size_t j = 1; j < radii.size(); ++j)
    if (radii[j] < radii[j - 1])
      throw std::invalid_argument("gauss counts: radii must be nondecreasing");

  const auto ranges = detail::chunk_ranges(n, workers);
  const std::uint64_t useed = static_cast<std::uint64_t>(seed);
  std::vector<std::vector<std::uint64_t>> buckets(
      ranges.size(), std::vector<std::uint64_t>(radii.size() + 1, 0));

  auto work = [&](std::size_t w) {
    Point x(f.dim);
    auto& bk = buckets[w];
    for (std::uint64_t i = ranges[w].first; i < ranges[w].second; ++i) {
      SampleStream st(useed, i);
      for (int k = 0; k < f.dim; ++k) x[k] = st.normal();
      double depth = f.depth(x);
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
  std::vector<std::uint64_t> hits(radii.size(), 0);
  std::uint64_t run = 0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    run += total[j];
    hits[j] = run;
  }
  return hits;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_cell(const std::function<double(double)>& f, double a, double b,
                      double tol) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double gaussian_moment(double p) {
  if (!(p > -1.0)) throw std::invalid_argument("gaussian_moment: p must exceed -1");
  return std::exp(log_moment(p));
}

MomentTable MomentTable::build(int p_max) {
  if (p_max < 0) throw std::invalid_argument("moment table: p_max must be >= 0");
  MomentTable t;
  t.values.resize(p_max + 1);
  for (int p = 0; p <= p_max; ++p) t.values[p] = gaussian_moment(p);
  return t;
}

DepthField scene_field(const Scene& s) {
  DepthField f;
  f.dim = s.cloud.dim;
  f.base_radius = s.r;
  f.depth = [scene = s](std::span<const double> x) { return scene_depth(scene, x); };
  return f;
}

DepthField halfspace_field(Point normal, double offset, double r) {
  double len = norm(normal);
  if (!(len > 0.0)) throw std::invalid_argument("halfspace_field: zero normal");
  if (!(r > 0.0)) throw std::invalid_argument("halfspace_field: r must be positive");
  for (auto& c : normal) c /= len;
  DepthField f;
  f.dim = static_cast<int>(normal.size());
  f.base_radius = r;
  f.depth = [u = std::move(normal), c = offset / len, r](std::span<const double> x) {
    return dot(u, x) - c + r;
  };
  return f;
}

GaussianEstimate gaussian_measure_mc(const DepthField& f, std::uint64_t n,
                                     std::int64_t seed, int workers) {
  auto hits = coupled_gauss_counts(f, {f.base_radius}, n, seed, workers);
  double p = static_cast<double>(hits[0]) / static_cast<double>(n);
  GaussianEstimate est;
  est.value = p;
  est.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  est.n_samples = n;
  est.seed = seed;
  est.method = GaussianMethod::direct_mc;
  return est;
}

GaussianEstimate gaussian_measure_mc(const Scene& s, std::uint64_t n,
                                     std::int64_t seed, int workers) {
  return gaussian_measure_mc(scene_field(s), n, seed, workers);
}

double gaussian_measure_radial(const std::function<double(double)>& volume_profile,
                               int d, const RadialGrid& grid) {
  if (d < 1) throw std::invalid_argument("gaussian_measure_radial: d must be >= 1");
  double t_max = grid.t_max > 0.0 ? grid.t_max : std::sqrt(static_cast<double>(d)) + 10.0;

  // Tail check: the Gaussian mass beyond t_max must be negligible even for
  // the whole space, i.e. the chi-square upper tail at t_max^2.
  double tail = boost::math::gamma_q(0.5 * d, 0.5 * t_max * t_max);
  if (!(tail < 1e-12))
    throw std::invalid_argument("gaussian_measure_radial: t_max truncates non-negligible mass");

  const int cells = std::max(4, grid.initial_cells);
  const double step = t_max / cells;
  double prev = 0.0;
  for (int k = 0; k <= cells; ++k) {
    double t = k * step;
    double v = volume_profile(t);
    if (!(v >= -1e-12) || !std::isfinite(v))
      throw std::invalid_argument("gaussian_measure_radial: profile must be nonnegative");
    if (v < prev * (1.0 - 1e-9) - 1e-12)
      throw std::invalid_argument("gaussian_measure_radial: profile must be nondecreasing");
    if (t > 0.0 && v > ball_volume(d, t) * (1.0 + 1e-9) + 1e-12)
      throw std::invalid_argument("gaussian_measure_radial: profile exceeds the ball volume");
    prev = v;
  }

  auto integrand = [&](double t) {
    return t * std::exp(-0.5 * t * t) * volume_profile(t);
  };
  // coarse total for the tolerance scale
  double coarse = 0.0;
  for (int k = 0; k < cells; ++k)
    coarse += integrate_cell(integrand, k * step, (k + 1) * step, 1e-3);
  double tol = grid.rel_tol * std::max(std::abs(coarse), 1e-300) / cells;

  KahanSum total;
  for (int k = 0; k < cells; ++k)
    total.add(integrate_cell(integrand, k * step, (k + 1) * step, tol));
  double log_norm = -0.5 * d * std::log(2.0 * M_PI);
  return total.sum * std::exp(log_norm);
}

SurfaceEstimate gaussian_surface_fd(const DepthField& f,
                                    const std::vector<double>& eps_schedule,
                                    std::uint64_t n, std::int64_t seed, int workers) {
  if (eps_schedule.size() < 2)
    throw std::invalid_argument("eps schedule: need at least 2 levels");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    if (!(eps_schedule[k] > 0.0))
      throw std::invalid_argument("eps schedule: entries must be positive");
    if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1]))
      throw std::invalid_argument("eps schedule: must be strictly decreasing");
  }

  std::vector<double> radii;
  radii.push_back(f.base_radius);
  for (auto it = eps_schedule.rbegin(); it != eps_schedule.rend(); ++it)
    radii.push_back(f.base_radius + *it);
  auto hits = coupled_gauss_counts(f, radii, n, seed, workers);

  const std::size_t L = eps_schedule.size();
  const double dn = static_cast<double>(n);
  std::vector<double> shell_p(L);
  for (std::size_t k = 0; k < L; ++k)
    shell_p[k] = static_cast<double>(hits[L - k] - hits[0]) / dn;

  SurfaceEstimate est;
  est.eps_schedule = eps_schedule;
  est.n_samples = n;
  est.seed = seed;
  est.raw_quotients.resize(L);
  for (std::size_t k = 0; k < L; ++k) {
    double p = shell_p[k];
    est.raw_quotients[k].value = p / eps_schedule[k];
    est.raw_quotients[k].std_error = std::sqrt(p * (1.0 - p) / dn) / eps_schedule[k];
  }
  auto fit = detail::extrapolate_ladder(eps_schedule, shell_p, 1.0, n);
  est.extrapolated = fit.extrapolated;
  est.extrapolated_error = fit.std_error;
  est.max_two_smallest =
      std::max(est.raw_quotients[L - 1].value, est.raw_quotients[L - 2].value);
  return est;
}

SurfaceEstimate gaussian_surface_fd(const Scene& s,
                                    const std::vector<double>& eps_schedule,
                                    std::uint64_t n, std::int64_t seed, int workers) {
  return gaussian_surface_fd(scene_field(s), eps_schedule, n, seed, workers);
}

double r_star(int d) {
  if (d < 1) throw std::invalid_argument("r_star: d must be >= 1");
  return 1.0 / (std::sqrt(static_cast<double>(d)) * 2.0 * std::sqrt(M_E));
}

double theorem2_bound(int d, double r) {
  if (d < 1 || !(r > 0.0)) throw std::invalid_argument("theorem2_bound: bad arguments");
  return 18.0 * d * std::max(std::sqrt(static_cast<double>(d)), 1.0 / r);
}

namespace {

// 2 sum_i (d^{d-i}/(d-i)!) (i^{i/2}/d^{d/2}) (2 sqrt(e) r)^{d-i}
double stirling_sum_term(int d, double r) {
  double logc = std::log(2.0 * std::sqrt(M_E) * r);
  double logd = std::log(static_cast<double>(d));
  KahanSum sum;
  for (int i = 0; i <= d; ++i) {
    double li = i > 0 ? 0.5 * i * std::log(static_cast<double>(i)) : 0.0;
    double lt = (d - i) * logd - std::lgamma(d - i + 1.0) + li - 0.5 * d * logd +
                (d - i) * logc;
    sum.add(std::exp(lt));
  }
  return 2.0 * sum.sum;
}

}  // namespace

BoundReport explicit_bound(int d, double r) {
  if (d < 1) throw std::invalid_argument("explicit_bound: d must be >= 1");
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("explicit_bound: r must be positive");

  BoundReport rep;
  rep.d = d;
  rep.r = r;
  rep.r_star = r_star(d);
  rep.regime = r <= rep.r_star ? Regime::below_r_star : Regime::above_r_star;
  rep.theorem_bound = theorem2_bound(d, r);

  double log2r = std::log(2.0 * r);
  double lmd1 = log_moment(d + 1.0);
  KahanSum sum;
  for (int i = 0; i <= d; ++i) {
    double lt = log_choose(d, i) + log_moment(i + 1.0) + (d - i) * log2r - lmd1;
    sum.add(std::exp(lt));
  }
  rep.explicit_bound = (d / r) * sum.sum;

  rep.sum_term = stirling_sum_term(d, std::min(r, rep.r_star));

  auto jog = jog_bounds(d, r);
  rep.jog_lebesgue_factor = jog.lebesgue_factor;
  rep.jog_gaussian = jog.gaussian_bound;
  return rep;
}

StirlingBracket stirling_gamma_bounds(double x) {
  bool is_half = std::abs(x - 0.5) < 1e-12;
  if (!is_half && !(x >= 1.0 - 1e-12))
    throw std::invalid_argument("stirling_gamma_bounds: x must be in [1, inf) or 1/2");
  StirlingBracket b;
  b.lower = std::exp(0.5 * std::log(2.0 * M_PI * x) + x * std::log(x) - x);
  b.gamma = std::exp(std::lgamma(x + 1.0));
  b.upper = 2.0 * b.lower;
  return b;
}

ChainLedger bound_chain_check(int d, double r) {
  if (d < 1) throw std::invalid_argument("bound_chain_check: d must be >= 1");
  double rs = r_star(d);
  if (!(r > 0.0) || r > rs * (1.0 + 1e-12))
    throw std::invalid_argument("bound_chain_check: requires 0 < r <= r_star");

  ChainLedger ledger;
  double logd = std::log(static_cast<double>(d));

  // (i) C(d, i) <= d^{d-i} / (d-i)!  (equality at i = d-1 and i = d)
  for (int i = 0; i <= d; ++i) {
    double llhs = log_choose(d, i);
    double lrhs = (d - i) * logd - std::lgamma(d - i + 1.0);
    ChainCheck c;
    c.name = "binomial_bound[i=" + std::to_string(i) + "]";
    c.lhs = std::exp(llhs);
    c.rhs = std::exp(lrhs);
    c.pass = llhs <= lrhs + 1e-9;
    ledger.checks.push_back(std::move(c));
  }

  // (ii) Stirling-reduced sum <= 2e
  {
    ChainCheck c;
    c.name = "stirling_sum_le_2e";
    c.lhs = stirling_sum_term(d, r);
    c.rhs = 2.0 * M_E;
    c.pass = c.lhs <= c.rhs * (1.0 + 1e-12);
    ledger.checks.push_back(std::move(c));
  }

  // (iii) sum_{j=0}^{d} 1/j! <= e, summed smallest-first
  {
    KahanSum s;
    for (int j = d; j >= 0; --j) s.add(std::exp(-std::lgamma(j + 1.0)));
    ChainCheck c;
    c.name = "factorial_tail_le_e";
    c.lhs = s.sum;
    c.rhs = M_E;
    c.pass = c.lhs <= c.rhs * (1.0 + 1e-12);
    ledger.checks.push_back(std::move(c));
  }

  // (iv) B(d, r) <= 2 e d / r
  {
    ChainCheck c;
    c.name = "explicit_bound_le_2ed_over_r";
    c.lhs = explicit_bound(d, r).explicit_bound;
    c.rhs = 2.0 * M_E * d / r;
    c.pass = c.lhs <= c.rhs * (1.0 + 1e-12);
    ledger.checks.push_back(std::move(c));
  }

  ledger.all_pass = std::all_of(ledger.checks.begin(), ledger.checks.end(),
                                [](const ChainCheck& c) { return c.pass; });
  return ledger;
}

JogBounds jog_bounds(int d, double r) {
  if (d < 1 || !(r > 0.0)) throw std::invalid_argument("jog_bounds: bad arguments");
  double l2 = (2.0 * d - 1.0) * kLn2;
  JogBounds out;
  out.lebesgue_factor = std::exp(l2 + std::log(static_cast<double>(d)));
  out.gaussian_bound = std::exp(l2 + 2.0 * std::log(static_cast<double>(d)) +
                                d * std::log(3.0) + std::log(std::max(1.0, 1.0 / r)));
  return out;
}

}  // namespace parset
