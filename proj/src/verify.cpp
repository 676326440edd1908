#include "parset/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "parset/rng.hpp"

namespace parset {

namespace {

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ull;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

void fnv_double(std::uint64_t& h, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof(bits));
  fnv_bytes(h, &bits, sizeof(bits));
}

void check_grid(const std::vector<double>& g, const char* what) {
  if (g.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0) || !std::isfinite(g[i]))
      throw std::invalid_argument(std::string(what) + ": entries must be positive");
    if (i > 0 && !(g[i] > g[i - 1]))
      throw std::invalid_argument(std::string(what) + ": must be strictly increasing");
  }
}

void validate_config(const SweepConfig& cfg) {
  if (cfg.dims.empty() || cfg.r_values.empty())
    throw std::invalid_argument("sweep config: dims and r_values must be nonempty");
  for (int d : cfg.dims)
    if (d < 1) throw std::invalid_argument("sweep config: dims must be >= 1");
  for (double r : cfg.r_values)
    if (!(r > 0.0)) throw std::invalid_argument("sweep config: r_values must be positive");
  if (cfg.n_scenes < 1) throw std::invalid_argument("sweep config: n_scenes must be >= 1");
  if (cfg.cloud_size_max < 1)
    throw std::invalid_argument("sweep config: cloud_size_max must be >= 1");
  if (cfg.n_samples < 10000)
    throw std::invalid_argument("sweep config: n_samples must be >= 10^4");
}

}  // namespace

std::uint64_t scene_digest(const Scene& s) {
  std::uint64_t h = kFnvOffset;
  std::int32_t dim = s.cloud.dim;
  fnv_bytes(h, &dim, sizeof(dim));
  fnv_double(h, s.r);
  for (const auto& p : s.cloud.points)
    for (double c : p) fnv_double(h, c);
  if (const auto* ball = std::get_if<Ball>(&s.body)) {
    fnv_bytes(h, "B", 1);
    fnv_double(h, ball->radius);
  } else if (const auto* hp = std::get_if<HPolytope>(&s.body)) {
    fnv_bytes(h, "H", 1);
    for (const auto& hs : hp->halfspaces) {
      for (double c : hs.normal) fnv_double(h, c);
      fnv_double(h, hs.offset);
    }
  } else {
    fnv_bytes(h, "V", 1);
    for (const auto& v : std::get<VPolytope>(s.body).vertices)
      for (double c : v) fnv_double(h, c);
  }
  return h;
}

Scene generate_sweep_scene(const SweepConfig& cfg, int d, int index, bool ball_only,
                           BodyKind* kind_out, double* r_out) {
  const std::uint64_t stream_id =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(d)) << 32) |
      static_cast<std::uint32_t>(index);
  SampleStream st(static_cast<std::uint64_t>(cfg.seed), stream_id);

  double r = cfg.r_values[static_cast<std::size_t>(index) % cfg.r_values.size()];
  int m = 1 + static_cast<int>(st.below(static_cast<std::uint64_t>(cfg.cloud_size_max)));
  std::vector<Point> pts(m, Point(d));
  for (auto& p : pts)
    for (int k = 0; k < d; ++k) p[k] = st.uniform(-1.0, 1.0);

  BodyKind kind = ball_only ? BodyKind::ball : static_cast<BodyKind>(st.below(3));
  ConvexBody body;
  switch (kind) {
    case BodyKind::ball:
      body = Ball{ball_only ? 1.0 : st.uniform(0.5, 1.5)};
      break;
    case BodyKind::cube: {
      HPolytope hp;
      for (int i = 0; i < d; ++i) {
        double s = st.uniform(0.5, 1.5);
        for (double sign : {1.0, -1.0}) {
          Halfspace hs;
          hs.normal.assign(d, 0.0);
          hs.normal[i] = sign;
          hs.offset = s;
          hp.halfspaces.push_back(std::move(hs));
        }
      }
      body = std::move(hp);
      break;
    }
    case BodyKind::cross: {
      VPolytope vp;
      for (int i = 0; i < d; ++i) {
        double s = st.uniform(0.5, 1.5);
        for (double sign : {1.0, -1.0}) {
          Point v(d, 0.0);
          v[i] = sign * s;
          vp.vertices.push_back(std::move(v));
        }
      }
      body = std::move(vp);
      break;
    }
  }
  if (kind_out) *kind_out = kind;
  if (r_out) *r_out = r;
  return Scene(PointCloud(d, std::move(pts)), std::move(body), r);
}

namespace {

SweepReport run_sweep(const SweepConfig& cfg, bool thm2) {
  validate_config(cfg);
  SweepReport report;
  report.kind = thm2 ? "thm2" : "thm1";
  report.config = cfg;

  for (int d : cfg.dims) {
    for (int k = 0; k < cfg.n_scenes; ++k) {
      SweepRecord rec;
      rec.index = k;
      rec.d = d;
      Scene scene = generate_sweep_scene(cfg, d, k, thm2, &rec.body, &rec.r);
      rec.cloud_size = static_cast<int>(scene.cloud.points.size());
      rec.digest = scene_digest(scene);
      const std::uint64_t stream_id =
          (static_cast<std::uint64_t>(static_cast<std::uint32_t>(d)) << 32) |
          static_cast<std::uint32_t>(k);
      rec.scene_seed = static_cast<std::int64_t>(
          mix64(static_cast<std::uint64_t>(cfg.seed) ^ mix64(stream_id)));

      if (thm2) {
        rec.bound = theorem2_bound(d, rec.r);
        auto est = gaussian_surface_fd(scene, default_eps_schedule(rec.r),
                                       cfg.n_samples, rec.scene_seed, cfg.workers);
        rec.measured = est.extrapolated;
        rec.ci = est.extrapolated_error;
        double ci = std::max(rec.ci, 1e-300);
        rec.margin_sigma = (rec.bound - rec.measured) / ci;
        double explicit_at_rstar =
            explicit_bound(d, std::min(rec.r, r_star(d))).explicit_bound;
        rec.explicit_margin_sigma = (explicit_at_rstar - rec.measured) / ci;
        rec.pass = rec.measured <= rec.bound + cfg.tolerance_sigmas * rec.ci;
      } else {
        rec.bound = d / rec.r;
        try {
          auto est = ratio_thm1(scene, cfg.n_samples, rec.scene_seed, {}, cfg.workers);
          rec.measured = est.ratio;
          rec.ci = est.ci;
          rec.margin_sigma = (rec.bound - rec.measured) / std::max(rec.ci, 1e-300);
          rec.pass = rec.measured <= rec.bound + cfg.tolerance_sigmas * rec.ci;
        } catch (const std::runtime_error&) {
          rec.skipped = true;  // ill-conditioned ratio; logged, not counted
        }
      }
      report.records.push_back(std::move(rec));
    }
  }

  std::size_t counted = 0, passed = 0;
  for (const auto& rec : report.records) {
    if (rec.skipped) {
      ++report.n_skipped;
      continue;
    }
    ++counted;
    if (rec.pass) ++passed;
  }
  report.pass_rate = counted ? static_cast<double>(passed) / counted : 0.0;
  report.pass = counted > 0 && report.pass_rate >= cfg.required_pass_rate;
  return report;
}

}  // namespace

SweepReport thm1_sweep(const SweepConfig& cfg) { return run_sweep(cfg, false); }

SweepReport thm2_sweep(const SweepConfig& cfg) { return run_sweep(cfg, true); }

MonotonicityReport monotonicity_check(const PointCloud& cloud, const ConvexBody& body,
                                      const std::vector<double>& s_grid,
                                      const std::vector<double>& t_grid,
                                      std::uint64_t n, std::int64_t seed,
                                      double tol_sigmas) {
  check_grid(s_grid, "s_grid");
  check_grid(t_grid, "t_grid");
  validate_body(body, cloud.dim);
  if (n == 0) throw std::invalid_argument("monotonicity_check: n must be >= 1");

  const int d = cloud.dim;
  const std::size_t S = s_grid.size(), T = t_grid.size();
  const double dn = static_cast<double>(n);

  // Shared box covering s_max A + t_max K.
  Box box;
  box.lo.resize(d);
  box.hi.resize(d);
  {
    Point u(d, 0.0);
    for (int i = 0; i < d; ++i) {
      double mn = std::numeric_limits<double>::infinity(), mx = -mn;
      for (const auto& a : cloud.points)
        for (double s : {s_grid.front(), s_grid.back()}) {
          mn = std::min(mn, s * a[i]);
          mx = std::max(mx, s * a[i]);
        }
      u.assign(d, 0.0);
      u[i] = -1.0;
      box.lo[i] = mn - t_grid.back() * support(body, u);
      u[i] = 1.0;
      box.hi[i] = mx + t_grid.back() * support(body, u);
    }
  }

  // Per (s, t): hit counts; per consecutive s pair and t: discordant counts.
  std::vector<std::vector<std::uint64_t>> buckets(S, std::vector<std::uint64_t>(T + 1, 0));
  std::vector<std::vector<std::int64_t>> d01(S > 1 ? S - 1 : 0),
      d10(S > 1 ? S - 1 : 0);
  for (auto& v : d01) v.assign(T + 1, 0);
  for (auto& v : d10) v.assign(T + 1, 0);

  Point x(d), diff(d);
  std::vector<std::size_t> idx(S);
  const std::uint64_t useed = static_cast<std::uint64_t>(seed);
  for (std::uint64_t smp = 0; smp < n; ++smp) {
    SampleStream st(useed, smp);
    for (int k = 0; k < d; ++k) x[k] = st.uniform(box.lo[k], box.hi[k]);
    for (std::size_t i = 0; i < S; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& a : cloud.points) {
        for (int k = 0; k < d; ++k) diff[k] = x[k] - s_grid[i] * a[k];
        best = std::min(best, gauge(body, diff));
      }
      auto it = std::lower_bound(t_grid.begin(), t_grid.end(), best);
      idx[i] = static_cast<std::size_t>(it - t_grid.begin());
      ++buckets[i][idx[i]];
    }
    for (std::size_t i = 0; i + 1 < S; ++i) {
      if (idx[i + 1] < idx[i]) {        // hits at s_{i+1} but not s_i for t in [idx_{i+1}, idx_i)
        ++d01[i][idx[i + 1]];
        --d01[i][idx[i]];
      } else if (idx[i] < idx[i + 1]) {  // hits at s_i but not s_{i+1}
        ++d10[i][idx[i]];
        --d10[i][idx[i + 1]];
      }
    }
  }

  MonotonicityReport report;
  report.s_grid = s_grid;
  report.t_grid = t_grid;
  double boxvol = box.volume();

  std::vector<std::vector<std::uint64_t>> hits(S, std::vector<std::uint64_t>(T, 0));
  report.estimates.assign(S, std::vector<VolumeEstimate>(T));
  for (std::size_t i = 0; i < S; ++i) {
    std::uint64_t run = 0;
    for (std::size_t j = 0; j < T; ++j) {
      run += buckets[i][j];
      hits[i][j] = run;
      double p = static_cast<double>(run) / dn;
      auto& est = report.estimates[i][j];
      est.value = boxvol * p;
      est.std_error = boxvol * std::sqrt(p * (1.0 - p) / dn);
      est.n_samples = n;
      est.seed = seed;
      est.method = VolumeMethod::monte_carlo;
    }
  }

  // (i) t direction: exact by coupling.
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t j = 0; j + 1 < T; ++j)
      if (hits[i][j + 1] < hits[i][j])
        report.violations.push_back({"t_exact", i, j, 0.0, 0.0});

  // (i) s direction: statistical, from the discordant-pair counts.
  for (std::size_t i = 0; i + 1 < S; ++i) {
    std::int64_t a01 = 0, a10 = 0;
    for (std::size_t j = 0; j < T; ++j) {
      a01 += d01[i][j];
      a10 += d10[i][j];
      double q01 = static_cast<double>(a01) / dn;
      double q10 = static_cast<double>(a10) / dn;
      double diff_est = boxvol * (q01 - q10);
      double var = (q01 + q10 - (q01 - q10) * (q01 - q10)) / dn;
      double sigma = boxvol * std::sqrt(std::max(0.0, var));
      if (diff_est < -tol_sigmas * sigma - 1e-300)
        report.violations.push_back({"s_statistical", i, j, diff_est, sigma});
    }
  }

  // (ii) t -> V / t^d nonincreasing: statistical on the coupled estimates.
  for (std::size_t i = 0; i < S; ++i) {
    for (std::size_t j = 0; j + 1 < T; ++j) {
      double a0 = std::pow(t_grid[j], -d), a1 = std::pow(t_grid[j + 1], -d);
      double p = static_cast<double>(hits[i][j]) / dn;
      double q = static_cast<double>(hits[i][j + 1] - hits[i][j]) / dn;
      double diff_est = boxvol * (p * (a1 - a0) + q * a1);
      double c1 = a1 - a0, c2 = a1;
      double var = (c1 * c1 * p * (1.0 - p) + c2 * c2 * q * (1.0 - q) -
                    2.0 * c1 * c2 * p * q) /
                   dn;
      double sigma = boxvol * std::sqrt(std::max(0.0, var));
      if (diff_est > tol_sigmas * sigma + 1e-300)
        report.violations.push_back({"t_scale_statistical", i, j, diff_est, sigma});
    }
  }

  // Closed-form oracle for ball bodies over clouds of at most two points.
  if (const auto* ball = std::get_if<Ball>(&body); ball && cloud.points.size() <= 2) {
    std::vector<std::vector<double>> oracle(S, std::vector<double>(T));
    for (std::size_t i = 0; i < S; ++i)
      for (std::size_t j = 0; j < T; ++j) {
        double rho = t_grid[j] * ball->radius;
        if (cloud.points.size() == 1) {
          oracle[i][j] = ball_volume(d, rho);
        } else {
          Point c1 = cloud.points[0], c2 = cloud.points[1];
          for (auto& c : c1) c *= s_grid[i];
          for (auto& c : c2) c *= s_grid[i];
          oracle[i][j] = two_ball_union_volume(c1, c2, rho, d);
        }
      }
    const double tol = 1e-12;
    for (std::size_t i = 0; i < S; ++i)
      for (std::size_t j = 0; j < T; ++j) {
        if (j + 1 < T && oracle[i][j + 1] < oracle[i][j] * (1.0 - tol) - tol)
          report.violations.push_back({"t_oracle", i, j, oracle[i][j + 1] - oracle[i][j], 0.0});
        if (i + 1 < S && oracle[i + 1][j] < oracle[i][j] * (1.0 - tol) - tol)
          report.violations.push_back({"s_oracle", i, j, oracle[i + 1][j] - oracle[i][j], 0.0});
        if (j + 1 < T) {
          double q0 = oracle[i][j] / std::pow(t_grid[j], d);
          double q1 = oracle[i][j + 1] / std::pow(t_grid[j + 1], d);
          if (q1 > q0 * (1.0 + tol) + tol)
            report.violations.push_back({"t_scale_oracle", i, j, q1 - q0, 0.0});
        }
      }
    report.oracle = std::move(oracle);
  }

  report.pass = report.violations.empty();
  return report;
}

// ---------------------------------------------------------------------------
// r-parallel certificate: grid morphology with exact Euclidean distance
// transforms (Felzenszwalb-Huttenlocher, separable per axis).
// ---------------------------------------------------------------------------

namespace {

constexpr double kDtInf = 1e30;

// 1-d squared distance transform under the lower parabola envelope.
void dt_1d(const std::vector<double>& f, std::vector<double>& out,
           std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kDtInf;
  z[1] = kDtInf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kDtInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    double dq = q - v[k];
    out[q] = dq * dq + f[v[k]];
  }
}

// Squared Euclidean distance (in grid units) to the nearest seed cell.
void distance_transform(std::vector<double>& field, const std::vector<int>& shape) {
  const int dims = static_cast<int>(shape.size());
  std::vector<std::size_t> stride(dims, 1);
  for (int a = 1; a < dims; ++a) stride[a] = stride[a - 1] * shape[a - 1];
  std::size_t total = stride[dims - 1] * shape[dims - 1];

  for (int axis = 0; axis < dims; ++axis) {
    const int n = shape[axis];
    std::vector<double> line(n), out(n);
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    const std::size_t lines = total / n;
    for (std::size_t l = 0; l < lines; ++l) {
      // base index of this line: expand l over the remaining axes
      std::size_t base = 0, rem = l;
      for (int a = 0; a < dims; ++a) {
        if (a == axis) continue;
        std::size_t coord = rem % shape[a];
        rem /= shape[a];
        base += coord * stride[a];
      }
      for (int q = 0; q < n; ++q) line[q] = field[base + q * stride[axis]];
      dt_1d(line, out, v, z);
      for (int q = 0; q < n; ++q) field[base + q * stride[axis]] = out[q];
    }
  }
}

}  // namespace

CertificateResult r_parallel_certificate(const RegionOracle& region, double r, double h,
                                         std::size_t witness_cap) {
  const int d = region.window.dim();
  if (d < 1 || d > 3)
    throw std::invalid_argument("r_parallel_certificate: window dimension must be 1..3");
  if (!(r > 0.0)) throw std::invalid_argument("r_parallel_certificate: r must be positive");
  if (!(h > 0.0) || h > r / 10.0)
    throw std::invalid_argument("r_parallel_certificate: need 0 < h <= r/10");

  std::vector<int> shape(d);
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) {
    double side = region.window.hi[i] - region.window.lo[i];
    shape[i] = std::max(1, static_cast<int>(std::llround(side / h)));
    total *= static_cast<std::size_t>(shape[i]);
    if (total > 300'000'000ull)
      throw std::invalid_argument("r_parallel_certificate: grid too large");
  }
  std::vector<std::size_t> stride(d, 1);
  for (int a = 1; a < d; ++a) stride[a] = stride[a - 1] * shape[a - 1];

  auto cell_center = [&](std::size_t flat, Point& x) {
    for (int a = 0; a < d; ++a) {
      std::size_t coord = (flat / stride[a]) % shape[a];
      x[a] = region.window.lo[a] + (coord + 0.5) * h;
    }
  };

  std::vector<char> in_region(total);
  {
    Point x(d);
    for (std::size_t c = 0; c < total; ++c) {
      cell_center(c, x);
      in_region[c] = region.member(x) ? 1 : 0;
    }
  }

  // Erosion: cells whose distance to the nearest non-region cell exceeds the
  // probe radius. The probe is shrunk by one half-band so that an exactly
  // r-parallel region keeps a grid-visible erosion core; the coverage band
  // below absorbs the slack. Cells beyond the window are treated as
  // belonging to the region.
  const double half_band = h * std::sqrt(static_cast<double>(d));
  const double probe = (r - half_band) / h;
  std::vector<double> dist(total);
  for (std::size_t c = 0; c < total; ++c) dist[c] = in_region[c] ? kDtInf : 0.0;
  distance_transform(dist, shape);
  const double r_grid2 = probe * probe;
  std::vector<char> eroded(total);
  bool any_eroded = false;
  for (std::size_t c = 0; c < total; ++c) {
    eroded[c] = (in_region[c] && dist[c] > r_grid2) ? 1 : 0;
    any_eroded |= eroded[c] != 0;
  }

  // Distance to the eroded set; coverage = within r plus the grid band.
  for (std::size_t c = 0; c < total; ++c) dist[c] = eroded[c] ? 0.0 : kDtInf;
  if (any_eroded) distance_transform(dist, shape);

  CertificateResult res;
  res.band = 2.0 * h * std::sqrt(static_cast<double>(d));
  res.grid_shape = shape;
  const double cover = (r + res.band) / h;
  const double cover2 = cover * cover;

  Point x(d);
  for (std::size_t c = 0; c < total; ++c) {
    if (!in_region[c]) continue;
    cell_center(c, x);
    bool in_core = true;
    for (int a = 0; a < d && in_core; ++a)
      in_core = x[a] >= region.window.lo[a] + r && x[a] <= region.window.hi[a] - r;
    if (!in_core) continue;
    ++res.n_target;
    bool covered = any_eroded && dist[c] <= cover2;
    if (!covered) {
      ++res.n_uncovered;
      if (res.witnesses.size() < witness_cap) res.witnesses.push_back(x);
    }
  }
  res.pass = res.n_uncovered == 0;
  return res;
}

}  // namespace parset
