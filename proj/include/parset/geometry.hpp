#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace parset {

using Point = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);
double distance(std::span<const double> a, std::span<const double> b);

struct Ball {
  double radius = 1.0;
};

// normal . x <= offset
struct Halfspace {
  Point normal;
  double offset = 0.0;
};

struct HPolytope {
  std::vector<Halfspace> halfspaces;
};

struct VPolytope {
  std::vector<Point> vertices;
};

using ConvexBody = std::variant<Ball, HPolytope, VPolytope>;

// Dimension implied by the body's data; a Ball fits any dimension.
std::optional<int> body_dim(const ConvexBody& body);

// Enforces the body invariants in dimension d: positive radius, origin
// strictly interior, bounded support in the axis directions. Throws
// std::invalid_argument on violation.
void validate_body(const ConvexBody& body, int dim);

struct PointCloud {
  int dim = 0;
  std::vector<Point> points;

  // Validates and drops exact duplicates, keeping first occurrences.
  PointCloud(int dim, std::vector<Point> pts);
};

struct Scene {
  PointCloud cloud;
  ConvexBody body;
  double r = 0.0;

  Scene(PointCloud cloud, ConvexBody body, double r);
  int dim() const { return cloud.dim; }
};

struct Box {
  Point lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool contains(std::span<const double> x) const;
};

// Minkowski gauge inf{t >= 0 : v in t K}. Infinity cannot occur for bodies
// that passed validation (origin interior).
double gauge(const ConvexBody& body, std::span<const double> v);

// Support function h_K(u) = sup{x.u : x in K}. Throws std::runtime_error
// for an unbounded H-polytope.
double support(const ConvexBody& body, std::span<const double> u);

// Gauge distance from x to the cloud: min_a gauge(K, x - a).
// The parallel set at radius rho is exactly {x : scene_depth(s, x) <= rho}.
double scene_depth(const Scene& s, std::span<const double> x);

bool contains(const Scene& s, std::span<const double> x);

// Axis-aligned box containing the parallel set at radius `radius`
// (default: the scene's own r), inflated by `margin` on every side.
Box bounding_box(const Scene& s, double margin = 0.0);
Box bounding_box_at(const Scene& s, double radius, double margin = 0.0);

}  // namespace parset
