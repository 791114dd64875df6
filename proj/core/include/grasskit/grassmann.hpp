#pragma once

#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "grasskit/multivec.hpp"

namespace grasskit {

inline constexpr double kFrameTolerance = 1e-10;
inline constexpr double kDefaultTolerance = 1e-9;

// An n x p matrix with orthonormal columns. Column order carries orientation.
class OrientedFrame {
 public:
  explicit OrientedFrame(Eigen::MatrixXd columns, double tol = kFrameTolerance);

  // Gram-Schmidt in column order; keeps the orientation of the input columns.
  static OrientedFrame orthonormalize(const Eigen::MatrixXd& columns);
  // Columns e_1, ..., e_p of R^n.
  static OrientedFrame standard(int p, int n);

  int ambient_dim() const { return static_cast<int>(cols_.rows()); }
  int rank() const { return static_cast<int>(cols_.cols()); }
  const Eigen::MatrixXd& matrix() const { return cols_; }

 private:
  Eigen::MatrixXd cols_;
};

// A point of the oriented Grassmannian G+(p, n), held as an oriented
// orthonormal frame. The Pluecker image is computed on demand.
class GrassPoint {
 public:
  explicit GrassPoint(OrientedFrame frame) : frame_(std::move(frame)) {}
  explicit GrassPoint(Eigen::MatrixXd orthonormal_columns)
      : frame_(std::move(orthonormal_columns)) {}

  static GrassPoint standard(int p, int n) { return GrassPoint(OrientedFrame::standard(p, n)); }
  static GrassPoint span_of(const Eigen::MatrixXd& columns) {
    return GrassPoint(OrientedFrame::orthonormalize(columns));
  }

  int p() const { return frame_.rank(); }
  int n() const { return frame_.ambient_dim(); }
  const OrientedFrame& frame() const { return frame_; }
  const Eigen::MatrixXd& basis() const { return frame_.matrix(); }

  // Unit simple p-vector psi(V).
  MultiVector plucker() const;
  // Orthonormal basis of the orthogonal complement, n x (n - p); deterministic
  // for a given frame.
  Eigen::MatrixXd complement() const;
  // Same plane with the opposite orientation.
  GrassPoint reversed() const;

 private:
  OrientedFrame frame_;
};

/// Normalized wedge of the columns. Throws DomainError when the columns are
/// (numerically) dependent, |c_1 ^ ... ^ c_p| < 1e-12.
MultiVector plucker(const Eigen::MatrixXd& columns);
inline MultiVector plucker(const OrientedFrame& frame) { return plucker(frame.matrix()); }

// det(E_P^T E_Q) for the oriented orthonormal bases of P and Q.
double w_product(const GrassPoint& P, const GrassPoint& Q);
// Same quantity through the Pluecker embedding: <psi(P), psi(Q)>.
double w_product_plucker(const GrassPoint& P, const GrassPoint& Q);

/// Principal angles between oriented planes, sorted descending. cos(theta_i)
/// are the singular values of E_P^T E_Q, except that when the two bases have
/// opposite relative orientation the angle of the smallest singular value is
/// replaced by pi - arccos(sigma). At most one angle exceeds pi/2 and the
/// product of cosines equals w_product(P, Q).
std::vector<double> oriented_principal_angles(const GrassPoint& P, const GrassPoint& Q);

// Geodesic distance sqrt(sum theta_i^2).
double dist(const GrassPoint& P, const GrassPoint& Q);

// Tangent basis vector eta_{i alpha}: column i of `frame` replaced by column
// alpha of `normals`, wedged in order.
MultiVector tangent_basis_vector(const Eigen::MatrixXd& frame, const Eigen::MatrixXd& normals,
                                 int i, int alpha);

// p x (n-p) coordinates of an ambient p-vector in the eta basis at w
// (orthogonal projection onto the tangent space).
Eigen::MatrixXd tangent_coordinates(const GrassPoint& w, const MultiVector& X);
// sum_{i, alpha} A(i, alpha) eta_{i alpha} at w.
MultiVector tangent_from_coordinates(const GrassPoint& w, const Eigen::MatrixXd& A);

// Canonical form of a tangent vector: an adapted frame e_1..e_p of the base
// plane (same orientation), orthonormal normals n_1..n_r and speeds
// lambda_1 >= ... >= lambda_r > 0, so that
//   X = sum_i lambda_i e_1 ^ .. ^ n_i ^ .. ^ e_p.
// r = 0 encodes the zero tangent.
struct TangentCanonical {
  Eigen::MatrixXd frame;
  Eigen::MatrixXd normals;
  std::vector<double> lambda;

  int r() const { return static_cast<int>(lambda.size()); }
  int p() const { return static_cast<int>(frame.cols()); }
  int n() const { return static_cast<int>(frame.rows()); }
  GrassPoint base() const { return GrassPoint(frame); }
  double speed() const;
  MultiVector to_multivector() const;
  // Multiplies the tangent by s (negative s flips the normals).
  TangentCanonical scaled(double s) const;
  TangentCanonical normalized() const;
};

/// Canonical form of X = sum A(i, alpha) eta_{i alpha} at w, computed from a
/// singular value decomposition of A. Throws DomainError for A = 0.
TangentCanonical kozlov_canonical(const GrassPoint& w, const Eigen::MatrixXd& A,
                                  double rel_tol = 1e-12);

/// Canonical direction rotating frame column columns[j] into normal
/// normal_ids[j] with speed speeds[j]. Columns and normals are reordered so the
/// rotating pairs come first; orientation is preserved.
TangentCanonical make_canonical(const Eigen::MatrixXd& frame, const Eigen::MatrixXd& normals,
                                std::span<const int> columns, std::span<const int> normal_ids,
                                std::span<const double> speeds);

// Frame of w_X(t): e_i cos(lambda_i t) + n_i sin(lambda_i t) for i <= r, the
// remaining columns fixed.
Eigen::MatrixXd geodesic_frame(const TangentCanonical& X, double t);

class GeodesicPath {
 public:
  explicit GeodesicPath(TangentCanonical canonical) : canonical_(std::move(canonical)) {}

  const TangentCanonical& canonical() const { return canonical_; }
  double speed() const { return canonical_.speed(); }
  GrassPoint eval(double t) const { return GrassPoint(geodesic_frame(canonical_, t)); }

 private:
  TangentCanonical canonical_;
};

inline GrassPoint geodesic_eval(const GeodesicPath& g, double t) { return g.eval(t); }
inline GrassPoint geodesic_eval(const TangentCanonical& X, double t) {
  return GrassPoint(geodesic_frame(X, t));
}

// exp_w(X) = w_X(1) for X given by eta coordinates.
GrassPoint exp_map(const GrassPoint& w, const Eigen::MatrixXd& A);

/// Inverse of exp_map: canonical data at w whose geodesic reaches v at t = 1,
/// with speeds equal to the principal angles. Throws CutLocusError when the
/// largest angle is within tol of pi.
TangentCanonical log_map(const GrassPoint& w, const GrassPoint& v, double tol = kDefaultTolerance);

// Frame of Q adapted to P: columns are the principal vectors of Q (oriented
// like Q) and normals.col(i) is the direction in which column i rotates away
// from P, for i < paired. The remaining normals complete an orthonormal basis
// of the complement of Q.
struct PrincipalFrame {
  Eigen::MatrixXd frame;        // n x p
  Eigen::MatrixXd normals;      // n x (n-p)
  int paired = 0;
  std::vector<double> angles;   // principal angle of each column (0 past `paired`)
};
PrincipalFrame principal_frame(const GrassPoint& P, const GrassPoint& Q);

/// Critical time pi / (2 (lambda_(1) + lambda_(2))) of a unit tangent, with the
/// two largest speeds counted with multiplicity (lambda_(2) = 0 when r = 1).
double t_crit(const TangentCanonical& X);

// theta_1 + theta_2 <= pi/2 (closed) or < pi/2 (open), tolerance tol.
bool in_BG(const GrassPoint& w, const GrassPoint& v, bool closed, double tol = kDefaultTolerance);

struct GeodesicPeriod {
  double period = 0.0;
  std::vector<long long> multiples;  // k^i with lambda_i T = pi k^i
};

/// Smallest T > 0 with lambda_i T = pi k^i for integers k^i <= max_k and
/// sum k^i even. Empty when no such T exists within max_k.
std::optional<GeodesicPeriod> closed_geodesic_period(const TangentCanonical& X,
                                                     double tol = kDefaultTolerance,
                                                     int max_k = 64);

// max{pi, sqrt(r0) pi / 2} with r0 = min(p, n - p).
double diameter(int p, int n);

/// Unit directions of type k at w: every k-subset of frame columns rotated into
/// every k-subset of normals, matched in order, each with speed 1/sqrt(k).
/// For k = 1 these are the p (n-p) directions eta_{i alpha}; for n - p = 2 and
/// k = 2 they are the p(p-1)/2 type-2 directions.
std::vector<TangentCanonical> type_k_directions(const GrassPoint& w, int k);
std::vector<TangentCanonical> type_k_directions(const Eigen::MatrixXd& frame,
                                                const Eigen::MatrixXd& normals, int k);

GrassPoint random_grass_point(int p, int n, std::mt19937_64& rng);
// Gaussian p x q matrix scaled to unit Frobenius norm (a unit tangent).
Eigen::MatrixXd random_unit_coordinates(int p, int q, std::mt19937_64& rng);

}  // namespace grasskit
