#pragma once

#include <random>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "grasskit/grassmann.hpp"

namespace grasskit {

// Target manifolds the region and flow code can work on. Points of
// Euclidean space and of spheres are plain coordinate vectors; spheres are
// unit spheres S^m in R^(m+1).
enum class AmbientKind { kEuclidean, kSphere, kSphereProduct, kGrassmannian };

struct Ambient {
  AmbientKind kind = AmbientKind::kEuclidean;
  int a = 0;  // Euclidean dim | sphere coordinate dim | first factor coord dim | p
  int b = 0;  // unused | unused | second factor coord dim | n

  static Ambient euclidean(int d);
  static Ambient sphere(int m);  // S^m
  static Ambient sphere_product(int m1, int m2);
  static Ambient grassmannian(int p, int n);

  // Intrinsic dimension.
  int dimension() const;
  std::string describe() const;
  friend bool operator==(const Ambient&, const Ambient&) = default;
};

struct ProductPoint {
  Eigen::VectorXd first;
  Eigen::VectorXd second;
};

using Point = std::variant<Eigen::VectorXd, ProductPoint, GrassPoint>;

// Tangent vectors: ambient coordinates for Euclidean space and spheres (the
// two factors concatenated for products); canonical data for Grassmannians.
using Tangent = std::variant<Eigen::VectorXd, TangentCanonical>;

bool on_manifold(const Ambient& m, const Point& x, double tol = 1e-8);
// Throws DomainError when x is not a point of m within tol.
void require_on_manifold(const Ambient& m, const Point& x, double tol = 1e-8);

double distance(const Ambient& m, const Point& x, const Point& y);

// Closed-form geodesic: gamma(0) = x, gamma'(0) = v, evaluated at t.
Point geodesic_point(const Ambient& m, const Point& x, const Tangent& v, double t);

// v with geodesic_point(m, x, v, 1) = y along a minimizing geodesic. Throws
// DomainError at antipodal/cut points where that geodesic is not unique.
Tangent connecting_tangent(const Ambient& m, const Point& x, const Point& y);

double tangent_norm(const Ambient& m, const Tangent& v);

// Random point of a compact ambient (uniform on spheres; Haar on
// Grassmannians). Euclidean spaces have no such measure and are rejected.
Point random_point(const Ambient& m, std::mt19937_64& rng);

Tangent random_unit_tangent(const Ambient& m, const Point& x, std::mt19937_64& rng);

// `count` unit tangents at x evenly spaced on the unit circle of a
// two-dimensional tangent space (Euclidean plane or S^2).
std::vector<Tangent> direction_circle(const Ambient& m, const Point& x, int count);

// Angle between two unit tangents at the same point.
double tangent_angle(const Ambient& m, const Tangent& u, const Tangent& v);

}  // namespace grasskit
