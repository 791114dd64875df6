#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <grasskit/errors.hpp>
#include <grasskit/gaussmap.hpp>

namespace grasskit {
namespace {

Eigen::MatrixXd random_jacobian(int p, int q, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd J(p, q);
  for (Eigen::Index k = 0; k < J.size(); ++k) J.data()[k] = g(rng);
  return J;
}

TEST(Slope, ClosedForms) {
  Eigen::MatrixXd J(1, 1);
  J << 0.75;
  EXPECT_DOUBLE_EQ(slope(J), 1.25);
  Eigen::MatrixXd row(1, 2);
  row << 2.0, 2.0;
  EXPECT_DOUBLE_EQ(slope(row), 3.0);
  Eigen::MatrixXd col(2, 1);
  col << 2.0, 2.0;
  EXPECT_DOUBLE_EQ(slope(col), 3.0);
}

TEST(Slope, DeterminantOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + static_cast<int>(rng() % 4);
    const int q = 1 + static_cast<int>(rng() % 4);
    const Eigen::MatrixXd J = random_jacobian(p, q, rng, 3.0);
    const double det = (Eigen::MatrixXd::Identity(p, p) + J * J.transpose()).determinant();
    EXPECT_NEAR(slope(J), std::sqrt(det), 1e-10 * std::sqrt(det));
  }
}

TEST(GaussPoint, ReciprocalOfSlope) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const int p = 1 + static_cast<int>(rng() % 4);
    const int q = 1 + static_cast<int>(rng() % 4);
    const GraphJacobianSample s{Eigen::VectorXd::Zero(p), random_jacobian(p, q, rng, 2.0)};
    EXPECT_LT(reciprocal_check(s), 1e-12);
  }
}

TEST(GaussPoint, SpansGraphTangents) {
  std::mt19937_64 rng(3);
  const GraphJacobianSample s{Eigen::VectorXd::Zero(3), random_jacobian(3, 2, rng)};
  const Eigen::MatrixXd E = gauss_point(s).basis();
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd tangent = Eigen::VectorXd::Zero(5);
    tangent(i) = 1.0;
    tangent.tail(2) = s.J.row(i).transpose();
    EXPECT_LT((tangent - E * (E.transpose() * tangent)).norm(), 1e-12);
  }
  // Flat graphs map to the base plane with its orientation.
  EXPECT_NEAR(w_product(gauss_point({Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(2, 2)}), base_plane(2, 2)), 1.0,
              1e-15);
}

TEST(Samplers, JacobiansMatchFiniteDifferences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const std::string name : {"affine", "sincos", "quadratic", "perturbed"}) {
    const GraphSampler f = builtin_sampler(name);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd x(f.p);
      for (int i = 0; i < f.p; ++i) x(i) = u(rng);
      const Eigen::MatrixXd J = f.jacobian(x);
      ASSERT_EQ(J.rows(), f.p);
      ASSERT_EQ(J.cols(), f.q);
      for (int i = 0; i < f.p; ++i) {
        Eigen::VectorXd h = Eigen::VectorXd::Zero(f.p);
        h(i) = 1e-6;
        const Eigen::VectorXd d = (f.value(x + h) - f.value(x - h)) / 2e-6;
        EXPECT_LT((d - J.row(i).transpose()).norm(), 1e-7) << name;
      }
    }
  }
  EXPECT_THROW(builtin_sampler("cubic"), DomainError);
}

TEST(Samplers, BlowDownRescalesJacobian) {
  const GraphSampler f = blow_down(quadratic_sampler(2), 3.0);
  const Eigen::Vector2d x(0.5, -1.0);
  EXPECT_LT((f.jacobian(x) - quadratic_sampler(2).jacobian(3.0 * x)).norm(), 1e-15);
  EXPECT_LT((f.value(x) - Eigen::Vector2d(3.0 * 1.25, 0.0)).norm(), 1e-14);
  EXPECT_THROW(blow_down(f, 0.0), DomainError);
}

TEST(ScanGrid, CoversBox) {
  const auto samples = scan_grid(builtin_sampler("affine"), 2.0, 5);
  ASSERT_EQ(samples.size(), 25u);
  EXPECT_DOUBLE_EQ(samples.front().x(0), -2.0);
  EXPECT_DOUBLE_EQ(samples.back().x(1), 2.0);
  EXPECT_EQ(scan_grid(perturbed_sampler(), 1.0, 3).size(), 81u);
}

TEST(ReadGrid, ParsesRows) {
  std::istringstream in("# x1 x2 ; J11 J12 J21 J22\n0 1 ; 1 2 3 4\n\n2 3 ; 0 0 0 0\n");
  const auto samples = read_jacobian_grid(in);
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_DOUBLE_EQ(samples[0].J(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(samples[0].J(1, 0), 3.0);
  EXPECT_DOUBLE_EQ(samples[1].x(1), 3.0);

  std::istringstream bad("0 1 ; 1 2 x 4\n");
  EXPECT_THROW(read_jacobian_grid(bad), DomainError);
  std::istringstream mixed("0 1 ; 1 2 3 4\n0 1 ; 1 2\n");
  EXPECT_THROW(read_jacobian_grid(mixed), DomainError);
  std::istringstream nosemi("0 1 1 2 3 4\n");
  EXPECT_THROW(read_jacobian_grid(nosemi), DomainError);
}

TEST(Verdict, AffineIsPositiveWithZeroSpread) {
  const auto samples = scan_grid(builtin_sampler("affine"), 10.0, 9);
  const CheckReport r = bernstein_verdict(samples, 2.0);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.worst_case["gauss_spread"].get<double>(), 0.0, 1e-7);
}

TEST(Verdict, SinCosBoundedSlope) {
  const auto samples = scan_grid(sincos_sampler(), 10.0, 41);
  const CheckReport r = bernstein_verdict(samples, 2.0);
  EXPECT_TRUE(r.passed);
  EXPECT_GE(r.worst_case["min_w_product"].get<double>(), 0.5);
  // Slope here is sqrt((1 + cos^2 x1)(1 + sin^2 x2)) <= 2.
  EXPECT_LE(r.worst_case["max_slope"].get<double>(), 2.0);
  EXPECT_TRUE(hemisphere_report(samples, 2.0).passed);
}

TEST(Verdict, QuadraticFailsOnGrowingBoxes) {
  const GraphSampler f = quadratic_sampler(2);
  EXPECT_TRUE(bernstein_verdict(scan_grid(f, 0.1, 9), 2.0).passed);
  const CheckReport r = bernstein_verdict(scan_grid(f, 10.0, 9), 2.0);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.worst_case["slope_violations"].get<int>(), 0);
  EXPECT_FALSE(hemisphere_report(scan_grid(f, 10.0, 9), 2.0).passed);
}

TEST(Verdict, Validation) {
  const auto codim1 = scan_grid(affine_sampler(Eigen::MatrixXd::Ones(1, 2), Eigen::VectorXd::Zero(1)), 1.0, 3);
  EXPECT_THROW(bernstein_verdict(codim1, 2.0), DomainError);
  const auto samples = scan_grid(builtin_sampler("affine"), 1.0, 3);
  EXPECT_THROW(bernstein_verdict(samples, 2.0, 0.6), DomainError);
  EXPECT_NO_THROW(bernstein_verdict(samples, 2.0, 0.5));
  EXPECT_THROW(bernstein_verdict(samples, 0.5), DomainError);
  EXPECT_THROW(bernstein_verdict({}, 2.0), DomainError);
}

}  // namespace
}  // namespace grasskit
