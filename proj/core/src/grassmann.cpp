#include "grasskit/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "grasskit/errors.hpp"

namespace grasskit {

namespace {

constexpr double kPi = std::numbers::pi;

void require_same_shape(const GrassPoint& P, const GrassPoint& Q, const char* op) {
  if (P.p() != Q.p() || P.n() != Q.n()) {
    throw DomainError(std::string(op) + ": points belong to different Grassmannians");
  }
}

int permutation_parity(std::span<const int> order) {
  int inversions = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (order[i] > order[j]) ++inversions;
    }
  }
  return inversions & 1;
}

// Principal vectors of P and Q with matched orientation.
struct PrincipalPairs {
  Eigen::MatrixXd u;             // n x p, oriented like P
  Eigen::MatrixXd v;             // n x p, oriented like Q, <u_i, v_j> = 0 for i != j
  Eigen::MatrixXd perp;          // v_i minus its projection on P
  std::vector<double> theta;     // atan2(|perp_i|, <u_i, v_i>)
};

PrincipalPairs principal_pairs(const GrassPoint& P, const GrassPoint& Q) {
  const Eigen::MatrixXd& E = P.basis();
  const Eigen::MatrixXd& F = Q.basis();
  const Eigen::Index p = E.cols();
  const Eigen::MatrixXd M = E.transpose() * F;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd U = svd.matrixU();
  Eigen::MatrixXd V = svd.matrixV();
  if (U.determinant() < 0) {
    U.col(p - 1) *= -1.0;
    V.col(p - 1) *= -1.0;
  }
  PrincipalPairs out;
  out.u = E * U;
  out.v = F * V;
  // Opposite relative orientation: reverse the pair with the smallest cosine.
  if (V.determinant() < 0) out.v.col(p - 1) *= -1.0;
  out.perp = out.v - E * (E.transpose() * out.v);
  out.theta.resize(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) {
    const double c = out.u.col(i).dot(out.v.col(i));
    out.theta[static_cast<std::size_t>(i)] = std::atan2(out.perp.col(i).norm(), c);
  }
  return out;
}

// Reorders the columns so that `first` come before the rest (keeping
// relative order) and restores orientation by negating the first rotating
// column together with its normal when the permutation is odd.
TangentCanonical assemble(const Eigen::MatrixXd& frame, std::span<const int> rotating,
                          const Eigen::MatrixXd& normals, std::vector<double> speeds) {
  const int p = static_cast<int>(frame.cols());
  std::vector<int> order(rotating.begin(), rotating.end());
  std::vector<bool> used(static_cast<std::size_t>(p), false);
  for (int c : rotating) used[static_cast<std::size_t>(c)] = true;
  for (int c = 0; c < p; ++c) {
    if (!used[static_cast<std::size_t>(c)]) order.push_back(c);
  }
  TangentCanonical out;
  out.frame.resize(frame.rows(), p);
  for (int k = 0; k < p; ++k) out.frame.col(k) = frame.col(order[static_cast<std::size_t>(k)]);
  out.normals = normals;
  out.lambda = std::move(speeds);
  if (permutation_parity(order) == 1) {
    out.frame.col(0) *= -1.0;
    if (out.normals.cols() > 0) out.normals.col(0) *= -1.0;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- frames

OrientedFrame::OrientedFrame(Eigen::MatrixXd columns, double tol) : cols_(std::move(columns)) {
  if (cols_.cols() < 1 || cols_.rows() <= cols_.cols()) {
    throw DomainError("OrientedFrame: need 1 <= p < n");
  }
  if (cols_.rows() > kMaxDimension) throw DomainError("OrientedFrame: ambient dimension too large");
  if (!cols_.allFinite()) throw DomainError("OrientedFrame: non-finite entries");
  const Eigen::MatrixXd gram = cols_.transpose() * cols_;
  const double defect = (gram - Eigen::MatrixXd::Identity(cols_.cols(), cols_.cols())).cwiseAbs().maxCoeff();
  if (defect > tol) throw DomainError("OrientedFrame: columns are not orthonormal");
}

OrientedFrame OrientedFrame::orthonormalize(const Eigen::MatrixXd& columns) {
  Eigen::MatrixXd q = columns;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    }
    const double len = q.col(j).norm();
    if (!(len > 1e-12 * std::max(1.0, columns.col(j).norm()))) {
      throw DomainError("orthonormalize: columns are linearly dependent");
    }
    q.col(j) /= len;
  }
  return OrientedFrame(std::move(q));
}

OrientedFrame OrientedFrame::standard(int p, int n) {
  if (p < 1 || p >= n) throw DomainError("standard frame: need 1 <= p < n");
  return OrientedFrame(Eigen::MatrixXd::Identity(n, p));
}

MultiVector GrassPoint::plucker() const { return grasskit::plucker(basis()); }

Eigen::MatrixXd GrassPoint::complement() const {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis());
  const Eigen::MatrixXd Q = qr.householderQ();
  return Q.rightCols(n() - p());
}

GrassPoint GrassPoint::reversed() const {
  Eigen::MatrixXd E = basis();
  E.col(0) *= -1.0;
  return GrassPoint(std::move(E));
}

MultiVector plucker(const Eigen::MatrixXd& columns) {
  MultiVector psi = wedge_columns(columns);
  const double len = psi.norm();
  if (!(len >= 1e-12)) throw DomainError("plucker: frame is rank deficient");
  return psi * (1.0 / len);
}

double w_product(const GrassPoint& P, const GrassPoint& Q) {
  require_same_shape(P, Q, "w_product");
  return (P.basis().transpose() * Q.basis()).determinant();
}

double w_product_plucker(const GrassPoint& P, const GrassPoint& Q) {
  require_same_shape(P, Q, "w_product_plucker");
  return scalar_product(P.plucker(), Q.plucker());
}

std::vector<double> oriented_principal_angles(const GrassPoint& P, const GrassPoint& Q) {
  require_same_shape(P, Q, "oriented_principal_angles");
  auto theta = principal_pairs(P, Q).theta;
  std::sort(theta.begin(), theta.end(), std::greater<>());
  return theta;
}

double dist(const GrassPoint& P, const GrassPoint& Q) {
  const auto theta = oriented_principal_angles(P, Q);
  return std::sqrt(std::inner_product(theta.begin(), theta.end(), theta.begin(), 0.0));
}

// ---------------------------------------------------------------- tangents

MultiVector tangent_basis_vector(const Eigen::MatrixXd& frame, const Eigen::MatrixXd& normals,
                                 int i, int alpha) {
  Eigen::MatrixXd cols = frame;
  cols.col(i) = normals.col(alpha);
  return wedge_columns(cols);
}

Eigen::MatrixXd tangent_coordinates(const GrassPoint& w, const MultiVector& X) {
  if (X.dim() != w.n() || X.degree() != w.p()) {
    throw DomainError("tangent_coordinates: p-vector does not match the Grassmannian");
  }
  const Eigen::MatrixXd N = w.complement();
  Eigen::MatrixXd A(w.p(), N.cols());
  for (int i = 0; i < w.p(); ++i) {
    for (int a = 0; a < N.cols(); ++a) {
      A(i, a) = scalar_product(X, tangent_basis_vector(w.basis(), N, i, a));
    }
  }
  return A;
}

MultiVector tangent_from_coordinates(const GrassPoint& w, const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd N = w.complement();
  if (A.rows() != w.p() || A.cols() != N.cols()) {
    throw DomainError("tangent_from_coordinates: coordinate matrix must be p x (n-p)");
  }
  MultiVector X(w.n(), w.p());
  for (int i = 0; i < A.rows(); ++i) {
    for (int a = 0; a < A.cols(); ++a) {
      if (A(i, a) != 0.0) X += A(i, a) * tangent_basis_vector(w.basis(), N, i, a);
    }
  }
  return X;
}

double TangentCanonical::speed() const {
  return std::sqrt(std::inner_product(lambda.begin(), lambda.end(), lambda.begin(), 0.0));
}

MultiVector TangentCanonical::to_multivector() const {
  MultiVector X(n(), p());
  for (int i = 0; i < r(); ++i) {
    X += lambda[static_cast<std::size_t>(i)] * tangent_basis_vector(frame, normals, i, i);
  }
  return X;
}

TangentCanonical TangentCanonical::scaled(double s) const {
  TangentCanonical out = *this;
  if (s == 0.0) {
    out.normals.resize(n(), 0);
    out.lambda.clear();
    return out;
  }
  for (double& l : out.lambda) l *= std::abs(s);
  if (s < 0) out.normals *= -1.0;
  return out;
}

TangentCanonical TangentCanonical::normalized() const {
  const double len = speed();
  if (len == 0.0) throw DomainError("normalized: zero tangent");
  return scaled(1.0 / len);
}

TangentCanonical kozlov_canonical(const GrassPoint& w, const Eigen::MatrixXd& A, double rel_tol) {
  const Eigen::MatrixXd N = w.complement();
  if (A.rows() != w.p() || A.cols() != N.cols()) {
    throw DomainError("kozlov_canonical: coordinate matrix must be p x (n-p)");
  }
  if (!A.allFinite()) throw DomainError("kozlov_canonical: non-finite coordinates");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) throw DomainError("kozlov_canonical: zero tangent");
  Eigen::MatrixXd U = svd.matrixU();
  Eigen::MatrixXd V = svd.matrixV();
  const Eigen::Index p = U.cols();
  if (U.determinant() < 0) {
    // Keeps A = U S V^T: the partner column of V only exists when p <= q.
    U.col(p - 1) *= -1.0;
    if (p - 1 < sigma.size()) V.col(p - 1) *= -1.0;
  }
  int r = 0;
  while (r < sigma.size() && sigma(r) > rel_tol * sigma(0)) ++r;
  TangentCanonical out;
  out.frame = w.basis() * U;
  out.normals = (N * V).leftCols(r);
  out.lambda.assign(sigma.data(), sigma.data() + r);
  return out;
}

TangentCanonical make_canonical(const Eigen::MatrixXd& frame, const Eigen::MatrixXd& normals,
                                std::span<const int> columns, std::span<const int> normal_ids,
                                std::span<const double> speeds) {
  if (columns.size() != normal_ids.size() || columns.size() != speeds.size()) {
    throw DomainError("make_canonical: columns, normals and speeds must have equal length");
  }
  const Eigen::Index p = frame.cols();
  std::vector<bool> col_used(static_cast<std::size_t>(p), false);
  std::vector<bool> nrm_used(static_cast<std::size_t>(normals.cols()), false);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const int c = columns[j];
    const int a = normal_ids[j];
    if (c < 0 || c >= p || a < 0 || a >= normals.cols()) {
      throw DomainError("make_canonical: column or normal index out of range");
    }
    if (col_used[static_cast<std::size_t>(c)] || nrm_used[static_cast<std::size_t>(a)]) {
      throw DomainError("make_canonical: repeated column or normal");
    }
    col_used[static_cast<std::size_t>(c)] = nrm_used[static_cast<std::size_t>(a)] = true;
  }
  // Sort the rotating pairs by descending speed; zero speeds are dropped.
  std::vector<std::size_t> idx(columns.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(speeds[a]) > std::abs(speeds[b]); });
  std::vector<int> rotating;
  std::vector<double> lambda;
  Eigen::MatrixXd chosen(frame.rows(), 0);
  for (std::size_t k : idx) {
    if (speeds[k] == 0.0) continue;
    rotating.push_back(columns[k]);
    lambda.push_back(std::abs(speeds[k]));
    chosen.conservativeResize(Eigen::NoChange, chosen.cols() + 1);
    chosen.col(chosen.cols() - 1) = (speeds[k] < 0 ? -1.0 : 1.0) * normals.col(normal_ids[k]);
  }
  return assemble(frame, rotating, chosen, std::move(lambda));
}

Eigen::MatrixXd geodesic_frame(const TangentCanonical& X, double t) {
  Eigen::MatrixXd F = X.frame;
  for (int i = 0; i < X.r(); ++i) {
    const double s = X.lambda[static_cast<std::size_t>(i)] * t;
    F.col(i) = X.frame.col(i) * std::cos(s) + X.normals.col(i) * std::sin(s);
  }
  return F;
}

GrassPoint exp_map(const GrassPoint& w, const Eigen::MatrixXd& A) {
  if (A.size() > 0 && A.cwiseAbs().maxCoeff() == 0.0) return w;
  return geodesic_eval(kozlov_canonical(w, A), 1.0);
}

TangentCanonical log_map(const GrassPoint& w, const GrassPoint& v, double tol) {
  require_same_shape(w, v, "log_map");
  const PrincipalPairs pairs = principal_pairs(w, v);
  const int p = w.p();
  const double largest = *std::max_element(pairs.theta.begin(), pairs.theta.end());
  if (largest >= kPi - tol) {
    throw CutLocusError("log_map: target is on the cut locus (principal angle ~ pi)");
  }
  constexpr double kRotationFloor = 1e-12;
  std::vector<int> rotating;
  for (int i = 0; i < p; ++i) {
    if (pairs.theta[static_cast<std::size_t>(i)] > kRotationFloor) rotating.push_back(i);
  }
  std::stable_sort(rotating.begin(), rotating.end(), [&](int a, int b) {
    return pairs.theta[static_cast<std::size_t>(a)] > pairs.theta[static_cast<std::size_t>(b)];
  });
  Eigen::MatrixXd normals(w.n(), static_cast<Eigen::Index>(rotating.size()));
  std::vector<double> lambda;
  for (std::size_t k = 0; k < rotating.size(); ++k) {
    const int i = rotating[k];
    normals.col(static_cast<Eigen::Index>(k)) = pairs.perp.col(i).normalized();
    lambda.push_back(pairs.theta[static_cast<std::size_t>(i)]);
  }
  return assemble(pairs.u, rotating, normals, std::move(lambda));
}

PrincipalFrame principal_frame(const GrassPoint& P, const GrassPoint& Q) {
  require_same_shape(P, Q, "principal_frame");
  const PrincipalPairs pairs = principal_pairs(P, Q);
  const int p = P.p();
  const int n = P.n();
  // Normal of Q paired with column i: d/ds of the rotation u_i -> v_i, i.e.
  // -u_i sin(theta) + n_i cos(theta) with n_i = perp_i / |perp_i|.
  std::vector<int> rotated;
  std::vector<double> angles;
  Eigen::MatrixXd paired(n, 0);
  for (int i = 0; i < p; ++i) {
    const double s = pairs.perp.col(i).norm();
    if (s <= 1e-12) continue;
    const double th = pairs.theta[static_cast<std::size_t>(i)];
    const Eigen::VectorXd ni = pairs.perp.col(i) / s;
    rotated.push_back(i);
    angles.push_back(th);
    paired.conservativeResize(Eigen::NoChange, paired.cols() + 1);
    paired.col(paired.cols() - 1) = -pairs.u.col(i) * std::sin(th) + ni * std::cos(th);
  }
  TangentCanonical arranged = assemble(pairs.v, rotated, paired, angles);
  PrincipalFrame out;
  out.frame = std::move(arranged.frame);
  out.paired = static_cast<int>(rotated.size());
  out.angles = std::move(arranged.lambda);
  out.angles.resize(static_cast<std::size_t>(p), 0.0);
  // Complete with the orthogonal complement of span(frame, paired normals).
  Eigen::MatrixXd known(n, p + arranged.normals.cols());
  known << out.frame, arranged.normals;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(known);
  const Eigen::MatrixXd Qfull = qr.householderQ();
  out.normals.resize(n, n - p);
  out.normals << arranged.normals, Qfull.rightCols(n - p - arranged.normals.cols());
  return out;
}

// ---------------------------------------------------------------- B_G, periods

double t_crit(const TangentCanonical& X) {
  if (X.r() == 0) throw DomainError("t_crit: zero tangent");
  if (std::abs(X.speed() - 1.0) > kDefaultTolerance) {
    throw DomainError("t_crit: tangent must have unit length");
  }
  std::vector<double> lam = X.lambda;
  std::sort(lam.begin(), lam.end(), std::greater<>());
  const double second = lam.size() > 1 ? lam[1] : 0.0;
  return kPi / (2.0 * (lam[0] + second));
}

bool in_BG(const GrassPoint& w, const GrassPoint& v, bool closed, double tol) {
  const auto theta = oriented_principal_angles(w, v);
  const double sum = theta[0] + (theta.size() > 1 ? theta[1] : 0.0);
  return closed ? sum <= kPi / 2 + tol : sum < kPi / 2 - tol;
}

std::optional<GeodesicPeriod> closed_geodesic_period(const TangentCanonical& X, double tol,
                                                     int max_k) {
  if (X.r() == 0) throw DomainError("closed_geodesic_period: zero tangent");
  const double lead = X.lambda[0];
  for (int k1 = 1; k1 <= max_k; ++k1) {
    const double T = kPi * k1 / lead;
    GeodesicPeriod candidate{T, {k1}};
    long long total = k1;
    bool ok = true;
    for (int i = 1; i < X.r() && ok; ++i) {
      const double ratio = X.lambda[static_cast<std::size_t>(i)] * T / kPi;
      const double k = std::round(ratio);
      ok = std::abs(ratio - k) < tol && k <= max_k;
      candidate.multiples.push_back(static_cast<long long>(k));
      total += static_cast<long long>(k);
    }
    if (ok && total % 2 == 0) return candidate;
  }
  return std::nullopt;
}

double diameter(int p, int n) {
  if (p < 1 || p >= n) throw DomainError("diameter: need 1 <= p < n");
  const int r0 = std::min(p, n - p);
  return std::max(kPi, std::sqrt(static_cast<double>(r0)) * kPi / 2.0);
}

std::vector<TangentCanonical> type_k_directions(const Eigen::MatrixXd& frame,
                                                const Eigen::MatrixXd& normals, int k) {
  const int p = static_cast<int>(frame.cols());
  const int q = static_cast<int>(normals.cols());
  if (k < 1 || k > std::min(p, q)) throw DomainError("type_k_directions: k out of range");
  const auto& col_sets = CombinationTable::get(p).subsets(k);
  const auto& nrm_sets = CombinationTable::get(q).subsets(k);
  const std::vector<double> speeds(static_cast<std::size_t>(k), 1.0 / std::sqrt(static_cast<double>(k)));
  std::vector<TangentCanonical> out;
  out.reserve(col_sets.size() * nrm_sets.size());
  for (SubsetMask cols : col_sets) {
    const auto ci = mask_to_indices(cols);
    for (SubsetMask nrms : nrm_sets) {
      const auto ni = mask_to_indices(nrms);
      out.push_back(make_canonical(frame, normals, ci, ni, speeds));
    }
  }
  return out;
}

std::vector<TangentCanonical> type_k_directions(const GrassPoint& w, int k) {
  return type_k_directions(w.basis(), w.complement(), k);
}

GrassPoint random_grass_point(int p, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd M(n, p);
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) M(i, j) = gauss(rng);
  }
  return GrassPoint::span_of(M);
}

Eigen::MatrixXd random_unit_coordinates(int p, int q, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd A(p, q);
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, j) = gauss(rng);
  }
  return A / A.norm();
}

}  // namespace grasskit
