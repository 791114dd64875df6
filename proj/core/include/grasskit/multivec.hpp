#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "grasskit/combinatorics.hpp"

namespace grasskit {

// Element of the degree-p exterior power of R^n, stored densely: coefficient k
// belongs to the basis p-vector e_lambda where lambda is the k-th p-subset of
// {0..n-1} in lexicographic order. Degree 0 holds a single scalar.
class MultiVector {
 public:
  MultiVector(int n, int p);
  MultiVector(int n, int p, std::vector<double> coeffs);

  static MultiVector zero(int n, int p) { return MultiVector(n, p); }
  static MultiVector scalar(int n, double value);
  // e_{i_1} ^ ... ^ e_{i_p} for strictly increasing 0-based indices.
  static MultiVector basis(int n, std::span<const int> indices);
  static MultiVector basis(int n, std::initializer_list<int> indices) {
    return basis(n, std::span<const int>(indices.begin(), indices.size()));
  }
  static MultiVector vector(std::span<const double> components);
  static MultiVector vector(const Eigen::VectorXd& v);

  int dim() const { return n_; }
  int degree() const { return p_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](std::size_t k) const { return coeffs_[k]; }
  double& operator[](std::size_t k) { return coeffs_[k]; }
  // Coefficient w^lambda for a 0-based increasing index tuple.
  double coefficient(std::span<const int> indices) const;
  double coefficient(std::initializer_list<int> indices) const {
    return coefficient(std::span<const int>(indices.begin(), indices.size()));
  }
  double at_mask(SubsetMask mask) const;

  double norm() const;
  bool is_zero() const;
  Eigen::VectorXd as_vector() const;

  MultiVector& operator+=(const MultiVector& other);
  MultiVector& operator-=(const MultiVector& other);
  MultiVector& operator*=(double s);
  friend MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
  friend MultiVector operator-(MultiVector a, const MultiVector& b) { return a -= b; }
  friend MultiVector operator*(MultiVector a, double s) { return a *= s; }
  friend MultiVector operator*(double s, MultiVector a) { return a *= s; }
  friend MultiVector operator-(MultiVector a) { return a *= -1.0; }

 private:
  int n_;
  int p_;
  std::vector<double> coeffs_;
};

MultiVector wedge(const MultiVector& a, const MultiVector& b);

// Wedge of the columns of `columns` (n x p); each p x p minor is one coefficient.
MultiVector wedge_columns(const Eigen::MatrixXd& columns);

double scalar_product(const MultiVector& a, const MultiVector& b);

/// Inner multiplication omega ⌞ xi of degree p - q, defined as the adjoint of
/// wedging by xi: <omega ⌞ xi, phi> = <omega, xi ^ phi> for every phi.
/// On basis elements e_lambda ⌞ e_mu = sign(mu, lambda \ mu) e_{lambda \ mu}
/// when mu is contained in lambda and zero otherwise.
MultiVector inner_mult(const MultiVector& omega, const MultiVector& xi);

inline constexpr double kDefaultRankTolerance = 1e-8;

/// Orthonormal basis (as columns of an n x k matrix) of the rank space of w,
/// the span of w ⌞ e_mu over all (p-1)-subsets mu. The dimension counts
/// singular values above rel_tol times the largest one. Zero input yields an
/// n x 0 matrix.
Eigen::MatrixXd rank_space(const MultiVector& w, double rel_tol = kDefaultRankTolerance);

// A nonzero p-vector is decomposable iff its rank space has dimension p.
// Throws DomainError for the zero vector.
bool is_simple(const MultiVector& w, double rel_tol = kDefaultRankTolerance);

}  // namespace grasskit
