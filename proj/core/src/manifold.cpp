#include "grasskit/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "grasskit/errors.hpp"

namespace grasskit {

namespace {

const Eigen::VectorXd& as_vector(const Point& x) {
  const auto* v = std::get_if<Eigen::VectorXd>(&x);
  if (v == nullptr) throw DomainError("expected a coordinate-vector point");
  return *v;
}

const ProductPoint& as_product(const Point& x) {
  const auto* v = std::get_if<ProductPoint>(&x);
  if (v == nullptr) throw DomainError("expected a product point");
  return *v;
}

const GrassPoint& as_grass(const Point& x) {
  const auto* v = std::get_if<GrassPoint>(&x);
  if (v == nullptr) throw DomainError("expected a Grassmannian point");
  return *v;
}

const Eigen::VectorXd& as_vector(const Tangent& v) {
  const auto* t = std::get_if<Eigen::VectorXd>(&v);
  if (t == nullptr) throw DomainError("expected a coordinate tangent vector");
  return *t;
}

const TangentCanonical& as_canonical(const Tangent& v) {
  const auto* t = std::get_if<TangentCanonical>(&v);
  if (t == nullptr) throw DomainError("expected canonical tangent data");
  return *t;
}

double sphere_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  // atan2 form is accurate near 0 and pi.
  return std::atan2((x - y * y.dot(x)).norm(), x.dot(y));
}

Eigen::VectorXd sphere_geodesic(const Eigen::VectorXd& x, const Eigen::VectorXd& v, double t) {
  const double speed = v.norm();
  if (speed == 0.0) return x;
  Eigen::VectorXd out = x * std::cos(speed * t) + v * (std::sin(speed * t) / speed);
  return out / out.norm();
}

Eigen::VectorXd sphere_log(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd perp = y - x * x.dot(y);
  const double s = perp.norm();
  const double angle = std::atan2(s, x.dot(y));
  if (s < 1e-14) {
    if (angle > 1.0) throw DomainError("connecting_tangent: antipodal points on a sphere");
    return Eigen::VectorXd::Zero(x.size());
  }
  return perp * (angle / s);
}

Eigen::VectorXd random_sphere_tangent(const Eigen::VectorXd& x, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  for (;;) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = gauss(rng);
    g -= x * x.dot(g);
    if (g.norm() > 1e-8) return g / g.norm();
  }
}

void require_vector_size(const Eigen::VectorXd& v, int size) {
  if (v.size() != size) throw DomainError("point or tangent has the wrong dimension");
}

}  // namespace

Ambient Ambient::euclidean(int d) {
  if (d < 1) throw DomainError("euclidean: dimension must be positive");
  return {AmbientKind::kEuclidean, d, 0};
}

Ambient Ambient::sphere(int m) {
  if (m < 1) throw DomainError("sphere: dimension must be positive");
  return {AmbientKind::kSphere, m + 1, 0};
}

Ambient Ambient::sphere_product(int m1, int m2) {
  if (m1 < 1 || m2 < 1) throw DomainError("sphere_product: dimensions must be positive");
  return {AmbientKind::kSphereProduct, m1 + 1, m2 + 1};
}

Ambient Ambient::grassmannian(int p, int n) {
  if (p < 1 || p >= n || n > kMaxDimension) throw DomainError("grassmannian: need 1 <= p < n");
  return {AmbientKind::kGrassmannian, p, n};
}

int Ambient::dimension() const {
  switch (kind) {
    case AmbientKind::kEuclidean: return a;
    case AmbientKind::kSphere: return a - 1;
    case AmbientKind::kSphereProduct: return a + b - 2;
    case AmbientKind::kGrassmannian: return a * (b - a);
  }
  return 0;
}

std::string Ambient::describe() const {
  switch (kind) {
    case AmbientKind::kEuclidean: return "R^" + std::to_string(a);
    case AmbientKind::kSphere: return "S^" + std::to_string(a - 1);
    case AmbientKind::kSphereProduct:
      return "S^" + std::to_string(a - 1) + "xS^" + std::to_string(b - 1);
    case AmbientKind::kGrassmannian:
      return "G+(" + std::to_string(a) + "," + std::to_string(b) + ")";
  }
  return "?";
}

bool on_manifold(const Ambient& m, const Point& x, double tol) {
  switch (m.kind) {
    case AmbientKind::kEuclidean: {
      const auto* v = std::get_if<Eigen::VectorXd>(&x);
      return v != nullptr && v->size() == m.a && v->allFinite();
    }
    case AmbientKind::kSphere: {
      const auto* v = std::get_if<Eigen::VectorXd>(&x);
      return v != nullptr && v->size() == m.a && std::abs(v->norm() - 1.0) <= tol;
    }
    case AmbientKind::kSphereProduct: {
      const auto* v = std::get_if<ProductPoint>(&x);
      return v != nullptr && v->first.size() == m.a && v->second.size() == m.b &&
             std::abs(v->first.norm() - 1.0) <= tol && std::abs(v->second.norm() - 1.0) <= tol;
    }
    case AmbientKind::kGrassmannian: {
      const auto* g = std::get_if<GrassPoint>(&x);
      return g != nullptr && g->p() == m.a && g->n() == m.b;
    }
  }
  return false;
}

void require_on_manifold(const Ambient& m, const Point& x, double tol) {
  if (!on_manifold(m, x, tol)) throw DomainError("point is not on " + m.describe());
}

double distance(const Ambient& m, const Point& x, const Point& y) {
  switch (m.kind) {
    case AmbientKind::kEuclidean: return (as_vector(x) - as_vector(y)).norm();
    case AmbientKind::kSphere: return sphere_distance(as_vector(x), as_vector(y));
    case AmbientKind::kSphereProduct: {
      const auto& px = as_product(x);
      const auto& py = as_product(y);
      return std::hypot(sphere_distance(px.first, py.first), sphere_distance(px.second, py.second));
    }
    case AmbientKind::kGrassmannian: return dist(as_grass(x), as_grass(y));
  }
  return 0.0;
}

Point geodesic_point(const Ambient& m, const Point& x, const Tangent& v, double t) {
  switch (m.kind) {
    case AmbientKind::kEuclidean: {
      const auto& tv = as_vector(v);
      require_vector_size(tv, m.a);
      return Eigen::VectorXd(as_vector(x) + t * tv);
    }
    case AmbientKind::kSphere: {
      const auto& tv = as_vector(v);
      require_vector_size(tv, m.a);
      return sphere_geodesic(as_vector(x), tv, t);
    }
    case AmbientKind::kSphereProduct: {
      const auto& px = as_product(x);
      const auto& tv = as_vector(v);
      require_vector_size(tv, m.a + m.b);
      return ProductPoint{sphere_geodesic(px.first, tv.head(m.a), t),
                          sphere_geodesic(px.second, tv.tail(m.b), t)};
    }
    case AmbientKind::kGrassmannian: return geodesic_eval(as_canonical(v), t);
  }
  return x;
}

Tangent connecting_tangent(const Ambient& m, const Point& x, const Point& y) {
  switch (m.kind) {
    case AmbientKind::kEuclidean: return Eigen::VectorXd(as_vector(y) - as_vector(x));
    case AmbientKind::kSphere: return sphere_log(as_vector(x), as_vector(y));
    case AmbientKind::kSphereProduct: {
      const auto& px = as_product(x);
      const auto& py = as_product(y);
      Eigen::VectorXd v(m.a + m.b);
      v << sphere_log(px.first, py.first), sphere_log(px.second, py.second);
      return v;
    }
    case AmbientKind::kGrassmannian: {
      try {
        return log_map(as_grass(x), as_grass(y));
      } catch (const CutLocusError& e) {
        throw DomainError(e.what());
      }
    }
  }
  return Eigen::VectorXd();
}

double tangent_norm(const Ambient& m, const Tangent& v) {
  if (m.kind == AmbientKind::kGrassmannian) return as_canonical(v).speed();
  return as_vector(v).norm();
}

Point random_point(const Ambient& m, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  auto sphere_point = [&](int dim) {
    for (;;) {
      Eigen::VectorXd g(dim);
      for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = gauss(rng);
      if (g.norm() > 1e-8) return Eigen::VectorXd(g / g.norm());
    }
  };
  switch (m.kind) {
    case AmbientKind::kEuclidean: break;
    case AmbientKind::kSphere: return sphere_point(m.a);
    case AmbientKind::kSphereProduct: {
      Eigen::VectorXd first = sphere_point(m.a);
      return ProductPoint{std::move(first), sphere_point(m.b)};
    }
    case AmbientKind::kGrassmannian: return random_grass_point(m.a, m.b, rng);
  }
  throw DomainError("random_point: Euclidean space has no uniform distribution");
}

Tangent random_unit_tangent(const Ambient& m, const Point& x, std::mt19937_64& rng) {
  switch (m.kind) {
    case AmbientKind::kEuclidean: {
      std::normal_distribution<double> gauss;
      Eigen::VectorXd g(m.a);
      for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = gauss(rng);
      return Eigen::VectorXd(g / g.norm());
    }
    case AmbientKind::kSphere: return random_sphere_tangent(as_vector(x), rng);
    case AmbientKind::kSphereProduct: {
      const auto& px = as_product(x);
      Eigen::VectorXd v(m.a + m.b);
      // Split the unit speed between the factors with a uniform angle.
      std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2);
      const double phi = angle(rng);
      v << std::cos(phi) * random_sphere_tangent(px.first, rng),
          std::sin(phi) * random_sphere_tangent(px.second, rng);
      return v;
    }
    case AmbientKind::kGrassmannian: {
      const auto& g = as_grass(x);
      return kozlov_canonical(g, random_unit_coordinates(g.p(), g.n() - g.p(), rng));
    }
  }
  return Eigen::VectorXd();
}

std::vector<Tangent> direction_circle(const Ambient& m, const Point& x, int count) {
  if (count < 1) throw DomainError("direction_circle: count must be positive");
  Eigen::VectorXd b1;
  Eigen::VectorXd b2;
  if (m.kind == AmbientKind::kEuclidean && m.a == 2) {
    b1 = Eigen::Vector2d(1.0, 0.0);
    b2 = Eigen::Vector2d(0.0, 1.0);
  } else if (m.kind == AmbientKind::kSphere && m.a == 3) {
    const Eigen::Vector3d p = as_vector(x);
    Eigen::Vector3d seed = std::abs(p.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    Eigen::Vector3d e1 = (seed - p * p.dot(seed)).normalized();
    b1 = e1;
    b2 = p.cross(e1);
  } else {
    throw DomainError("direction_circle: needs a two-dimensional Euclidean or spherical ambient");
  }
  std::vector<Tangent> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / count;
    out.emplace_back(Eigen::VectorXd(std::cos(phi) * b1 + std::sin(phi) * b2));
  }
  return out;
}

double tangent_angle(const Ambient& m, const Tangent& u, const Tangent& v) {
  if (m.kind == AmbientKind::kGrassmannian) {
    const MultiVector a = as_canonical(u).to_multivector();
    const MultiVector b = as_canonical(v).to_multivector();
    const double c = scalar_product(a, b) / (a.norm() * b.norm());
    return std::acos(std::clamp(c, -1.0, 1.0));
  }
  const auto& a = as_vector(u);
  const auto& b = as_vector(v);
  return std::acos(std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0));
}

}  // namespace grasskit
