#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <grasskit/combinatorics.hpp>
#include <grasskit/errors.hpp>
#include <grasskit/multivec.hpp>

namespace grasskit {
namespace {

MultiVector random_mv(int n, int p, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MultiVector v(n, p);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = g(rng);
  return v;
}

TEST(MultiVector, HandExpandedWedge) {
  // (e1 + 2 e2) ^ (3 e1 + e3) = -6 e12 + e13 + 2 e23
  const double a[] = {1, 2, 0};
  const double b[] = {3, 0, 1};
  const MultiVector w = wedge(MultiVector::vector(a), MultiVector::vector(b));
  ASSERT_EQ(w.degree(), 2);
  EXPECT_DOUBLE_EQ(w.coefficient({0, 1}), -6.0);
  EXPECT_DOUBLE_EQ(w.coefficient({0, 2}), 1.0);
  EXPECT_DOUBLE_EQ(w.coefficient({1, 2}), 2.0);
}

TEST(MultiVector, BasisWedgeSigns) {
  const MultiVector e13 = MultiVector::basis(4, {0, 2});
  const MultiVector e2 = MultiVector::basis(4, {1});
  EXPECT_DOUBLE_EQ(wedge(e13, e2).coefficient({0, 1, 2}), -1.0);
  EXPECT_DOUBLE_EQ(wedge(e2, e13).coefficient({0, 1, 2}), -1.0);
  EXPECT_TRUE(wedge(e13, MultiVector::basis(4, {2})).is_zero());
}

// Each coefficient of c_1 ^ ... ^ c_p is the p x p minor on those rows.
TEST(MultiVector, WedgeColumnsEqualsMinors) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 6; ++n) {
    for (int p = 1; p <= n; ++p) {
      Eigen::MatrixXd M(n, p);
      for (Eigen::Index k = 0; k < M.size(); ++k) M.data()[k] = g(rng);
      const MultiVector w = wedge_columns(M);
      MultiVector chained = MultiVector::vector(Eigen::VectorXd(M.col(0)));
      for (int c = 1; c < p; ++c) chained = wedge(chained, MultiVector::vector(Eigen::VectorXd(M.col(c))));
      for (std::size_t r = 0; r < w.size(); ++r) {
        const std::vector<int> rows = unrank_combination(n, p, r);
        Eigen::MatrixXd minor(p, p);
        for (int i = 0; i < p; ++i) minor.row(i) = M.row(rows[static_cast<std::size_t>(i)]);
        EXPECT_NEAR(w[r], minor.determinant(), 1e-12);
        EXPECT_NEAR(chained[r], minor.determinant(), 1e-12);
      }
    }
  }
}

TEST(MultiVector, GradedCommutativity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const MultiVector a = random_mv(6, 2, rng);
    const MultiVector b = random_mv(6, 3, rng);
    const MultiVector c = random_mv(6, 1, rng);
    EXPECT_LT((wedge(a, b) - wedge(b, a)).norm(), 1e-12);
    EXPECT_LT((wedge(b, c) + wedge(c, b)).norm(), 1e-12);
  }
}

TEST(MultiVector, InnerMultOnBasis) {
  const MultiVector e123 = MultiVector::basis(3, {0, 1, 2});
  EXPECT_DOUBLE_EQ(inner_mult(e123, MultiVector::basis(3, {0})).coefficient({1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(inner_mult(e123, MultiVector::basis(3, {1})).coefficient({0, 2}), -1.0);
  EXPECT_DOUBLE_EQ(inner_mult(e123, MultiVector::basis(3, {2})).coefficient({0, 1}), 1.0);
  EXPECT_TRUE(inner_mult(MultiVector::basis(3, {0, 1}), MultiVector::basis(3, {2})).is_zero());
}

// The inner product is solved for coordinate by coordinate through wedges
// with basis elements, then compared with inner_mult.
TEST(MultiVector, InnerMultSolvedByWedge) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const int q = 1 + static_cast<int>(rng() % static_cast<unsigned>(p));
    const MultiVector omega = random_mv(n, p, rng);
    const MultiVector xi = random_mv(n, q, rng);
    const MultiVector got = inner_mult(omega, xi);
    ASSERT_EQ(got.degree(), p - q);
    for (std::size_t r = 0; r < got.size(); ++r) {
      const std::vector<int> idx = p - q > 0 ? unrank_combination(n, p - q, r) : std::vector<int>{};
      const MultiVector phi = p - q > 0 ? MultiVector::basis(n, idx) : MultiVector::scalar(n, 1.0);
      EXPECT_NEAR(got[r], scalar_product(omega, wedge(xi, phi)), 1e-12);
    }
  }
}

TEST(MultiVector, RankSpaceAndSimplicity) {
  const MultiVector e12 = MultiVector::basis(4, {0, 1});
  const MultiVector e34 = MultiVector::basis(4, {2, 3});
  EXPECT_TRUE(is_simple(e12));
  EXPECT_FALSE(is_simple(e12 + e34));
  EXPECT_EQ(rank_space(e12 + e34).cols(), 4);
  EXPECT_EQ(rank_space(e12).cols(), 2);
  EXPECT_EQ(rank_space(MultiVector::zero(4, 2)).cols(), 0);
  EXPECT_THROW(is_simple(MultiVector::zero(4, 2)), DomainError);

  // Rank space of a wedge is the column span.
  Eigen::MatrixXd M(5, 2);
  M << 1, 0, 2, 1, 0, 3, -1, 0, 0, 1;
  const Eigen::MatrixXd R = rank_space(wedge_columns(M));
  ASSERT_EQ(R.cols(), 2);
  EXPECT_LT((M - R * (R.transpose() * M)).norm(), 1e-12);
}

TEST(MultiVector, Validation) {
  EXPECT_THROW(MultiVector(3, 4), DomainError);
  EXPECT_THROW(MultiVector(3, 1, {1.0, 2.0}), DomainError);
  EXPECT_THROW(MultiVector(3, 1, {1.0, NAN, 0.0}), DomainError);
  EXPECT_THROW(wedge(MultiVector::basis(3, {0}), MultiVector::basis(4, {1})), DomainError);
  EXPECT_THROW(wedge(MultiVector::basis(3, {0, 1}), MultiVector::basis(3, {0, 2})), DomainError);
  EXPECT_THROW(inner_mult(MultiVector::basis(3, {0}), MultiVector::basis(3, {0, 1})), DomainError);
}

}  // namespace
}  // namespace grasskit
