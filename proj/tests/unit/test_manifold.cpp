#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <grasskit/errors.hpp>
#include <grasskit/manifold.hpp>

namespace grasskit {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Ambient, Dimensions) {
  EXPECT_EQ(Ambient::euclidean(3).dimension(), 3);
  EXPECT_EQ(Ambient::sphere(2).dimension(), 2);
  EXPECT_EQ(Ambient::sphere_product(2, 3).dimension(), 5);
  EXPECT_EQ(Ambient::grassmannian(2, 5).dimension(), 6);
}

TEST(Sphere, DistanceAndGeodesic) {
  const Ambient s2 = Ambient::sphere(2);
  const Point x = Eigen::VectorXd(Eigen::Vector3d::UnitX());
  const Point y = Eigen::VectorXd(Eigen::Vector3d::UnitY());
  EXPECT_NEAR(distance(s2, x, y), kPi / 2, 1e-15);
  EXPECT_NEAR(distance(s2, x, Point(Eigen::VectorXd(-Eigen::Vector3d::UnitX()))), kPi, 1e-15);

  const Tangent v = connecting_tangent(s2, x, y);
  EXPECT_NEAR(tangent_norm(s2, v), kPi / 2, 1e-15);
  const Eigen::VectorXd mid = std::get<Eigen::VectorXd>(geodesic_point(s2, x, v, 0.5));
  EXPECT_LT((mid - Eigen::Vector3d(1, 1, 0).normalized()).norm(), 1e-15);
  EXPECT_THROW(connecting_tangent(s2, x, Point(Eigen::VectorXd(-Eigen::Vector3d::UnitX()))), DomainError);
}

TEST(SphereProduct, PythagoreanDistance) {
  const Ambient m = Ambient::sphere_product(2, 2);
  const Point a = ProductPoint{Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitZ()};
  const Point b = ProductPoint{Eigen::Vector3d::UnitX(), Eigen::Vector3d(0, std::sin(0.3), std::cos(0.3))};
  EXPECT_NEAR(distance(m, a, b), std::hypot(kPi / 2, 0.3), 1e-14);
  const Tangent v = connecting_tangent(m, a, b);
  const Point end = geodesic_point(m, a, v, 1.0);
  EXPECT_NEAR(distance(m, end, b), 0.0, 1e-7);
}

TEST(OnManifold, Validation) {
  EXPECT_FALSE(on_manifold(Ambient::sphere(2), Point(Eigen::VectorXd(Eigen::Vector3d(1, 1, 0)))));
  EXPECT_THROW(require_on_manifold(Ambient::sphere(2), Point(Eigen::VectorXd(Eigen::Vector2d(1, 0)))), DomainError);
  EXPECT_THROW(require_on_manifold(Ambient::sphere(2), Point(GrassPoint::standard(1, 3))), DomainError);
  EXPECT_TRUE(on_manifold(Ambient::grassmannian(2, 4), Point(GrassPoint::standard(2, 4))));
  EXPECT_FALSE(on_manifold(Ambient::grassmannian(2, 5), Point(GrassPoint::standard(2, 4))));
}

TEST(RandomTangent, UnitAndTangent) {
  std::mt19937_64 rng(21);
  for (const Ambient& m : {Ambient::sphere(2), Ambient::sphere_product(2, 3), Ambient::grassmannian(2, 5)}) {
    for (int k = 0; k < 20; ++k) {
      const Point x = random_point(m, rng);
      EXPECT_TRUE(on_manifold(m, x));
      const Tangent v = random_unit_tangent(m, x, rng);
      EXPECT_NEAR(tangent_norm(m, v), 1.0, 1e-12);
      // Short geodesic steps move at unit speed.
      EXPECT_NEAR(distance(m, x, geodesic_point(m, x, v, 1e-3)), 1e-3, 1e-9);
    }
  }
  EXPECT_THROW(random_point(Ambient::euclidean(2), rng), DomainError);
}

TEST(DirectionCircle, EvenlySpaced) {
  const Ambient s2 = Ambient::sphere(2);
  const Point x = Eigen::VectorXd(Eigen::Vector3d(0, 0.6, 0.8));
  const auto dirs = direction_circle(s2, x, 12);
  ASSERT_EQ(dirs.size(), 12u);
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    EXPECT_NEAR(std::get<Eigen::VectorXd>(dirs[k]).dot(std::get<Eigen::VectorXd>(x)), 0.0, 1e-15);
    EXPECT_NEAR(tangent_angle(s2, dirs[k], dirs[(k + 1) % 12]), kPi / 6, 1e-12);
  }
  EXPECT_THROW(direction_circle(Ambient::euclidean(3), Point(Eigen::VectorXd::Zero(3)), 4), DomainError);
}

}  // namespace
}  // namespace grasskit
