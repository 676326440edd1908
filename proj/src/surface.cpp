#include "parset/surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parset {

namespace detail {

namespace {

// Cholesky solve of S x = rhs for several right-hand sides; returns false if
// S is not numerically positive definite.
bool cholesky_solve(std::vector<std::vector<double>> S,
                    std::vector<std::vector<double>>& rhs) {
  const std::size_t n = S.size();
  for (std::size_t k = 0; k < n; ++k) {
    double piv = S[k][k];
    for (std::size_t j = 0; j < k; ++j) piv -= S[k][j] * S[k][j];
    if (!(piv > 0.0) || !std::isfinite(piv)) return false;
    S[k][k] = std::sqrt(piv);
    for (std::size_t i = k + 1; i < n; ++i) {
      double v = S[i][k];
      for (std::size_t j = 0; j < k; ++j) v -= S[i][j] * S[k][j];
      S[i][k] = v / S[k][k];
    }
  }
  for (auto& b : rhs) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = b[i];
      for (std::size_t j = 0; j < i; ++j) v -= S[i][j] * b[j];
      b[i] = v / S[i][i];
    }
    for (std::size_t i = n; i-- > 0;) {
      double v = b[i];
      for (std::size_t j = i + 1; j < n; ++j) v -= S[j][i] * b[j];
      b[i] = v / S[i][i];
    }
  }
  return true;
}

}  // namespace

LadderFit extrapolate_ladder(const std::vector<double>& eps_desc,
                             const std::vector<double>& shell_p, double scale,
                             std::uint64_t n) {
  const std::size_t L = eps_desc.size();
  const double dn = static_cast<double>(n);
  std::vector<double> v(L), sigma(L);
  for (std::size_t k = 0; k < L; ++k) {
    v[k] = scale * shell_p[k] / eps_desc[k];
    sigma[k] = scale * std::sqrt(shell_p[k] * (1.0 - shell_p[k]) / dn) / eps_desc[k];
  }

  auto two_point = [&]() -> LadderFit {
    // smallest two levels sit at the end of the descending schedule
    double ea = eps_desc[L - 2], eb = eps_desc[L - 1];
    double denom = ea - eb;
    if (!(denom > 0.0)) return {v[L - 1], sigma[L - 1]};
    double lim = (ea * v[L - 1] - eb * v[L - 2]) / denom;
    double err = (ea * sigma[L - 1] + eb * sigma[L - 2]) / denom;
    return {lim, err};
  };

  // Covariance of nested shells: for eps_k >= eps_l the small shell is a
  // subset of the large one, giving cov = scale^2 p_l (1 - p_k) / (n e_k e_l).
  std::vector<std::vector<double>> S(L, std::vector<double>(L, 0.0));
  bool ok = true;
  for (std::size_t k = 0; k < L && ok; ++k) {
    if (!(shell_p[k] > 0.0) || !(shell_p[k] < 1.0)) ok = false;
    for (std::size_t l = k; l < L; ++l) {
      double cov = scale * scale * shell_p[l] * (1.0 - shell_p[k]) /
                   (dn * eps_desc[k] * eps_desc[l]);
      S[k][l] = cov;
      S[l][k] = cov;
    }
  }
  if (!ok) return two_point();

  std::vector<std::vector<double>> rhs = {std::vector<double>(L, 1.0), eps_desc, v};
  if (!cholesky_solve(S, rhs)) return two_point();

  auto dotv = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  std::vector<double> ones(L, 1.0);
  double m00 = dotv(ones, rhs[0]);
  double m01 = dotv(eps_desc, rhs[0]);
  double m11 = dotv(eps_desc, rhs[1]);
  double g0 = dotv(ones, rhs[2]);
  double g1 = dotv(eps_desc, rhs[2]);
  double det = m00 * m11 - m01 * m01;
  if (!(det > 0.0) || !std::isfinite(det)) return two_point();

  LadderFit fit;
  fit.extrapolated = (m11 * g0 - m01 * g1) / det;
  fit.std_error = std::sqrt(std::max(0.0, m11 / det));
  if (!std::isfinite(fit.extrapolated) || !std::isfinite(fit.std_error)) return two_point();
  return fit;
}

}  // namespace detail

std::vector<double> default_eps_schedule(double r, double eps0, int levels) {
  if (levels < 2) throw std::invalid_argument("eps schedule: need at least 2 levels");
  if (!(r > 0.0)) throw std::invalid_argument("eps schedule: r must be positive");
  double e0 = eps0 > 0.0 ? eps0 : r / 10.0;
  std::vector<double> out(levels);
  for (int k = 0; k < levels; ++k) out[k] = e0 * std::pow(2.0, -k);
  return out;
}

ShellQuotient shell_quotient(const Scene& s, double eps, std::uint64_t n,
                             std::int64_t seed, int workers,
                             std::optional<double> margin) {
  if (!(eps > 0.0)) throw std::invalid_argument("shell_quotient: eps must be positive");
  if (margin && eps > *margin)
    throw std::invalid_argument("shell_quotient: eps exceeds the sampling box margin");
  auto counts = detail::coupled_box_counts(s, {s.r, s.r + eps}, n, seed, workers);
  double boxvol = counts.box.volume();
  double p = static_cast<double>(counts.hits[1] - counts.hits[0]) / static_cast<double>(n);
  ShellQuotient q;
  q.value = boxvol * p / eps;
  q.std_error = boxvol * std::sqrt(p * (1.0 - p) / static_cast<double>(n)) / eps;
  return q;
}

namespace {

void check_schedule(const std::vector<double>& eps_schedule) {
  if (eps_schedule.size() < 2)
    throw std::invalid_argument("eps schedule: need at least 2 levels");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    if (!(eps_schedule[k] > 0.0) || !std::isfinite(eps_schedule[k]))
      throw std::invalid_argument("eps schedule: entries must be positive");
    if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1]))
      throw std::invalid_argument("eps schedule: must be strictly decreasing");
  }
}

SurfaceEstimate ladder_estimate(const std::vector<double>& eps_schedule,
                                const std::vector<double>& shell_p, double scale,
                                std::uint64_t n, std::int64_t seed) {
  SurfaceEstimate est;
  est.eps_schedule = eps_schedule;
  est.n_samples = n;
  est.seed = seed;
  est.raw_quotients.resize(eps_schedule.size());
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    double p = shell_p[k];
    est.raw_quotients[k].value = scale * p / eps_schedule[k];
    est.raw_quotients[k].std_error =
        scale * std::sqrt(p * (1.0 - p) / static_cast<double>(n)) / eps_schedule[k];
  }
  auto fit = detail::extrapolate_ladder(eps_schedule, shell_p, scale, n);
  est.extrapolated = fit.extrapolated;
  est.extrapolated_error = fit.std_error;
  std::size_t L = eps_schedule.size();
  est.max_two_smallest =
      std::max(est.raw_quotients[L - 1].value, est.raw_quotients[L - 2].value);
  return est;
}

}  // namespace

SurfaceEstimate outer_content(const Scene& s, const std::vector<double>& eps_schedule,
                              std::uint64_t n, std::int64_t seed, int workers) {
  check_schedule(eps_schedule);
  std::vector<double> radii;
  radii.push_back(s.r);
  for (auto it = eps_schedule.rbegin(); it != eps_schedule.rend(); ++it)
    radii.push_back(s.r + *it);
  auto counts = detail::coupled_box_counts(s, radii, n, seed, workers);
  double boxvol = counts.box.volume();

  const std::size_t L = eps_schedule.size();
  std::vector<double> shell_p(L);
  for (std::size_t k = 0; k < L; ++k) {
    // schedule index k corresponds to radii index L - k (largest eps last)
    std::uint64_t shell = counts.hits[L - k] - counts.hits[0];
    shell_p[k] = static_cast<double>(shell) / static_cast<double>(n);
  }
  return ladder_estimate(eps_schedule, shell_p, boxvol, n, seed);
}

double sphere_surface(int d, double rho) {
  if (d < 1) throw std::invalid_argument("sphere_surface: d must be >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("sphere_surface: rho must be positive");
  return d * ball_volume(d, 1.0) * std::pow(rho, d - 1);
}

RatioEstimate ratio_thm1(const Scene& s, std::uint64_t n, std::int64_t seed,
                         std::vector<double> eps_schedule, int workers) {
  if (eps_schedule.empty()) eps_schedule = default_eps_schedule(s.r);
  check_schedule(eps_schedule);

  std::vector<double> radii;
  radii.push_back(s.r);
  for (auto it = eps_schedule.rbegin(); it != eps_schedule.rend(); ++it)
    radii.push_back(s.r + *it);
  auto counts = detail::coupled_box_counts(s, radii, n, seed, workers);
  double boxvol = counts.box.volume();
  double dn = static_cast<double>(n);

  double pv = static_cast<double>(counts.hits[0]) / dn;
  RatioEstimate out;
  out.volume.value = boxvol * pv;
  out.volume.std_error = boxvol * std::sqrt(pv * (1.0 - pv) / dn);
  out.volume.n_samples = n;
  out.volume.seed = seed;
  out.volume.method = VolumeMethod::monte_carlo;
  if (counts.hits[0] == 0 || out.volume.value <= 5.0 * out.volume.std_error)
    throw std::runtime_error("ratio_thm1: volume estimate consistent with zero");

  const std::size_t L = eps_schedule.size();
  std::vector<double> shell_p(L);
  for (std::size_t k = 0; k < L; ++k)
    shell_p[k] = static_cast<double>(counts.hits[L - k] - counts.hits[0]) / dn;
  out.surface = ladder_estimate(eps_schedule, shell_p, boxvol, n, seed);

  out.ratio = out.surface.extrapolated / out.volume.value;
  out.ci = out.surface.extrapolated_error / out.volume.value +
           std::abs(out.ratio) * out.volume.std_error / out.volume.value;
  return out;
}

}  // namespace parset
