#include "grasskit/multivec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "grasskit/errors.hpp"

namespace grasskit {

namespace {

void require_same_space(const MultiVector& a, const MultiVector& b, const char* op) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) {
    throw DomainError(std::string(op) + ": multivectors live in different spaces");
  }
}

}  // namespace

MultiVector::MultiVector(int n, int p) : n_(n), p_(p) {
  if (n < 0 || n > kMaxDimension) {
    throw DomainError("MultiVector: ambient dimension out of range");
  }
  if (p < 0 || p > n) throw DomainError("MultiVector: degree must lie in [0, n]");
  coeffs_.assign(binomial(n, p), 0.0);
}

MultiVector::MultiVector(int n, int p, std::vector<double> coeffs) : MultiVector(n, p) {
  if (coeffs.size() != coeffs_.size()) {
    throw DomainError("MultiVector: expected " + std::to_string(coeffs_.size()) + " coefficients");
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw DomainError("MultiVector: coefficients must be finite");
  }
  coeffs_ = std::move(coeffs);
}

MultiVector MultiVector::scalar(int n, double value) {
  MultiVector out(n, 0);
  out.coeffs_[0] = value;
  return out;
}

MultiVector MultiVector::basis(int n, std::span<const int> indices) {
  MultiVector out(n, static_cast<int>(indices.size()));
  out.coeffs_[rank_combination(n, indices)] = 1.0;
  return out;
}

MultiVector MultiVector::vector(std::span<const double> components) {
  return MultiVector(static_cast<int>(components.size()), 1,
                     std::vector<double>(components.begin(), components.end()));
}

MultiVector MultiVector::vector(const Eigen::VectorXd& v) {
  return vector(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

double MultiVector::coefficient(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != p_) throw DomainError("coefficient: wrong index count");
  return coeffs_[rank_combination(n_, indices)];
}

double MultiVector::at_mask(SubsetMask mask) const {
  return coeffs_[CombinationTable::get(n_).rank(mask)];
}

double MultiVector::norm() const { return std::sqrt(scalar_product(*this, *this)); }

bool MultiVector::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

Eigen::VectorXd MultiVector::as_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(coeffs_.data(), static_cast<Eigen::Index>(coeffs_.size()));
}

MultiVector& MultiVector::operator+=(const MultiVector& other) {
  require_same_space(*this, other, "operator+");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

MultiVector& MultiVector::operator-=(const MultiVector& other) {
  require_same_space(*this, other, "operator-");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

MultiVector& MultiVector::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

MultiVector wedge(const MultiVector& a, const MultiVector& b) {
  if (a.dim() != b.dim()) throw DomainError("wedge: ambient dimensions differ");
  const int n = a.dim();
  const int degree = a.degree() + b.degree();
  if (degree > n) {
    throw DomainError("wedge: degree " + std::to_string(degree) + " exceeds ambient dimension " +
                      std::to_string(n));
  }
  const auto& table = CombinationTable::get(n);
  const auto& left = table.subsets(a.degree());
  const auto& right = table.subsets(b.degree());
  MultiVector out(n, degree);
  for (std::size_t i = 0; i < left.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < right.size(); ++j) {
      const double bj = b[j];
      if (bj == 0.0 || (left[i] & right[j]) != 0) continue;
      out[table.rank(left[i] | right[j])] += merge_sign(left[i], right[j]) * ai * bj;
    }
  }
  return out;
}

MultiVector wedge_columns(const Eigen::MatrixXd& columns) {
  const int n = static_cast<int>(columns.rows());
  const int p = static_cast<int>(columns.cols());
  MultiVector out(n, p);
  if (p == 0) {
    out[0] = 1.0;
    return out;
  }
  const auto& subsets = CombinationTable::get(n).subsets(p);
  Eigen::MatrixXd minor(p, p);
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    SubsetMask mask = subsets[k];
    for (int row = 0; mask != 0; ++row) {
      const int idx = std::countr_zero(mask);
      mask &= mask - 1;
      minor.row(row) = columns.row(idx);
    }
    out[k] = p == 1 ? minor(0, 0) : minor.determinant();
  }
  return out;
}

double scalar_product(const MultiVector& a, const MultiVector& b) {
  require_same_space(a, b, "scalar_product");
  return std::inner_product(a.coeffs().begin(), a.coeffs().end(), b.coeffs().begin(), 0.0);
}

MultiVector inner_mult(const MultiVector& omega, const MultiVector& xi) {
  if (omega.dim() != xi.dim()) throw DomainError("inner_mult: ambient dimensions differ");
  if (omega.degree() < xi.degree()) {
    throw DomainError("inner_mult: degree of omega must be at least the degree of xi");
  }
  const int n = omega.dim();
  const auto& table = CombinationTable::get(n);
  const auto& outer = table.subsets(omega.degree());
  const auto& inner = table.subsets(xi.degree());
  MultiVector out(n, omega.degree() - xi.degree());
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const double wi = omega[i];
    if (wi == 0.0) continue;
    for (std::size_t j = 0; j < inner.size(); ++j) {
      const double xj = xi[j];
      if (xj == 0.0 || (outer[i] & inner[j]) != inner[j]) continue;
      const SubsetMask rest = outer[i] & ~inner[j];
      out[table.rank(rest)] += merge_sign(inner[j], rest) * wi * xj;
    }
  }
  return out;
}

Eigen::MatrixXd rank_space(const MultiVector& w, double rel_tol) {
  const int n = w.dim();
  const int p = w.degree();
  if (p == 0 || w.is_zero()) return Eigen::MatrixXd(n, 0);
  const auto& lower = CombinationTable::get(n).subsets(p - 1);
  // Row k holds w ⌞ e_mu for the k-th (p-1)-subset mu.
  Eigen::MatrixXd images(static_cast<Eigen::Index>(lower.size()), n);
  for (std::size_t k = 0; k < lower.size(); ++k) {
    MultiVector mu(n, p - 1);
    mu[k] = 1.0;
    images.row(static_cast<Eigen::Index>(k)) = inner_mult(w, mu).as_vector().transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(images, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return Eigen::MatrixXd(n, 0);
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > rel_tol * sigma(0)) ++rank;
  return svd.matrixV().leftCols(rank);
}

bool is_simple(const MultiVector& w, double rel_tol) {
  if (w.is_zero()) throw DomainError("is_simple: undefined for the zero p-vector");
  return rank_space(w, rel_tol).cols() == w.degree();
}

}  // namespace grasskit
