#include "parset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "parset/linprog.hpp"

namespace parset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
}

void check_dim(std::size_t got, int want, const char* what) {
  if (static_cast<int>(got) != want)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// gauge of conv(vertices) as the LP  min sum(mu)  s.t.  V mu = x, mu >= 0.
// Any feasible mu certifies x in (sum mu) K; infeasible means x is outside
// the cone spanned by the vertices, i.e. the gauge is infinite.
double vpolytope_gauge(const VPolytope& body, std::span<const double> x) {
  const std::size_t d = x.size();
  const std::size_t nv = body.vertices.size();
  std::vector<std::vector<double>> A(d, std::vector<double>(nv));
  for (std::size_t j = 0; j < nv; ++j)
    for (std::size_t i = 0; i < d; ++i) A[i][j] = body.vertices[j][i];
  std::vector<double> b(x.begin(), x.end());
  std::vector<double> c(nv, 1.0);
  LpResult res = solve_standard_lp(A, std::move(b), c);
  if (res.status == LpStatus::infeasible) return kInf;
  if (res.status != LpStatus::optimal)
    throw std::runtime_error("gauge: vertex-hull LP failed");
  return std::max(0.0, res.objective);
}

// support of an H-polytope as the LP  max u.x  s.t.  N x <= b, x free,
// rewritten in standard form with x = p - q and slacks.
double hpolytope_support(const HPolytope& body, std::span<const double> u) {
  const std::size_t d = u.size();
  const std::size_t m = body.halfspaces.size();
  const std::size_t nvars = 2 * d + m;
  std::vector<std::vector<double>> A(m, std::vector<double>(nvars, 0.0));
  std::vector<double> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& hs = body.halfspaces[i];
    for (std::size_t j = 0; j < d; ++j) {
      A[i][j] = hs.normal[j];
      A[i][d + j] = -hs.normal[j];
    }
    A[i][2 * d + i] = 1.0;
    b[i] = hs.offset;
  }
  std::vector<double> c(nvars, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    c[j] = -u[j];
    c[d + j] = u[j];
  }
  LpResult res = solve_standard_lp(A, std::move(b), c);
  if (res.status == LpStatus::unbounded)
    throw std::runtime_error("support: unbounded H-polytope");
  if (res.status != LpStatus::optimal)
    throw std::runtime_error("support: H-polytope LP failed");
  return -res.objective;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::optional<int> body_dim(const ConvexBody& body) {
  if (std::holds_alternative<Ball>(body)) return std::nullopt;
  if (const auto* hp = std::get_if<HPolytope>(&body)) {
    if (hp->halfspaces.empty()) return std::nullopt;
    return static_cast<int>(hp->halfspaces.front().normal.size());
  }
  const auto& vp = std::get<VPolytope>(body);
  if (vp.vertices.empty()) return std::nullopt;
  return static_cast<int>(vp.vertices.front().size());
}

void validate_body(const ConvexBody& body, int dim) {
  if (dim < 1) throw std::invalid_argument("body: dimension must be >= 1");
  if (const auto* ball = std::get_if<Ball>(&body)) {
    if (!(ball->radius > 0.0) || !std::isfinite(ball->radius))
      throw std::invalid_argument("ball: radius must be positive");
    return;
  }
  if (const auto* hp = std::get_if<HPolytope>(&body)) {
    if (hp->halfspaces.empty()) throw std::invalid_argument("hpolytope: no halfspaces");
    for (const auto& hs : hp->halfspaces) {
      check_dim(hs.normal.size(), dim, "hpolytope normal");
      check_finite(hs.normal, "hpolytope normal");
      if (norm(hs.normal) == 0.0) throw std::invalid_argument("hpolytope: zero normal");
      if (!(hs.offset > 0.0) || !std::isfinite(hs.offset))
        throw std::invalid_argument("hpolytope: offset must be positive (origin interior)");
    }
    // Bounded iff the support is finite in every +-axis direction.
    Point u(dim, 0.0);
    for (int i = 0; i < dim; ++i) {
      for (double sign : {1.0, -1.0}) {
        u.assign(dim, 0.0);
        u[i] = sign;
        try {
          support(body, u);
        } catch (const std::runtime_error&) {
          throw std::invalid_argument("hpolytope: unbounded");
        }
      }
    }
    return;
  }
  const auto& vp = std::get<VPolytope>(body);
  if (vp.vertices.empty()) throw std::invalid_argument("vpolytope: no vertices");
  for (const auto& v : vp.vertices) {
    check_dim(v.size(), dim, "vpolytope vertex");
    check_finite(v, "vpolytope vertex");
  }
  // Origin strictly interior iff the gauge is finite along every +-axis
  // direction (subadditivity extends finiteness to all of R^d).
  Point u(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    for (double sign : {1.0, -1.0}) {
      u.assign(dim, 0.0);
      u[i] = sign;
      if (!std::isfinite(gauge(body, u)))
        throw std::invalid_argument("vpolytope: origin is not interior to the vertex hull");
    }
  }
}

PointCloud::PointCloud(int dim_, std::vector<Point> pts) : dim(dim_) {
  if (dim < 1) throw std::invalid_argument("point cloud: dimension must be >= 1");
  if (pts.empty()) throw std::invalid_argument("point cloud: empty");
  std::set<Point> seen;
  points.reserve(pts.size());
  for (auto& p : pts) {
    check_dim(p.size(), dim, "point");
    check_finite(p, "point");
    if (seen.insert(p).second) points.push_back(std::move(p));
  }
}

Scene::Scene(PointCloud cloud_, ConvexBody body_, double r_)
    : cloud(std::move(cloud_)), body(std::move(body_)), r(r_) {
  if (auto bd = body_dim(body); bd && *bd != cloud.dim)
    throw std::invalid_argument("scene: body dimension does not match cloud dimension");
  validate_body(body, cloud.dim);
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("scene: r must be positive");
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

double gauge(const ConvexBody& body, std::span<const double> v) {
  if (auto bd = body_dim(body); bd) check_dim(v.size(), *bd, "gauge");
  if (const auto* ball = std::get_if<Ball>(&body)) return norm(v) / ball->radius;
  if (const auto* hp = std::get_if<HPolytope>(&body)) {
    double g = 0.0;
    for (const auto& hs : hp->halfspaces) g = std::max(g, dot(hs.normal, v) / hs.offset);
    return g;
  }
  return vpolytope_gauge(std::get<VPolytope>(body), v);
}

double support(const ConvexBody& body, std::span<const double> u) {
  if (auto bd = body_dim(body); bd) check_dim(u.size(), *bd, "support");
  if (const auto* ball = std::get_if<Ball>(&body)) return ball->radius * norm(u);
  if (const auto* vp = std::get_if<VPolytope>(&body)) {
    double h = -kInf;
    for (const auto& v : vp->vertices) h = std::max(h, dot(v, u));
    return h;
  }
  return hpolytope_support(std::get<HPolytope>(body), u);
}

double scene_depth(const Scene& s, std::span<const double> x) {
  check_dim(x.size(), s.cloud.dim, "scene_depth");
  thread_local Point diff;
  diff.resize(x.size());
  double best = kInf;
  for (const auto& a : s.cloud.points) {
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = x[i] - a[i];
    best = std::min(best, gauge(s.body, diff));
    if (best == 0.0) break;
  }
  return best;
}

bool contains(const Scene& s, std::span<const double> x) {
  return scene_depth(s, x) <= s.r;
}

Box bounding_box_at(const Scene& s, double radius, double margin) {
  const int d = s.cloud.dim;
  Box box;
  box.lo.resize(d);
  box.hi.resize(d);
  Point u(d, 0.0);
  for (int i = 0; i < d; ++i) {
    double mn = kInf, mx = -kInf;
    for (const auto& a : s.cloud.points) {
      mn = std::min(mn, a[i]);
      mx = std::max(mx, a[i]);
    }
    u.assign(d, 0.0);
    u[i] = -1.0;
    box.lo[i] = mn - radius * support(s.body, u) - margin;
    u[i] = 1.0;
    box.hi[i] = mx + radius * support(s.body, u) + margin;
  }
  return box;
}

Box bounding_box(const Scene& s, double margin) {
  return bounding_box_at(s, s.r, margin);
}

}  // namespace parset
