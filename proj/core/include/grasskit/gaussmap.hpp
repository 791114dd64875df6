#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grasskit/grassmann.hpp"
#include "grasskit/report.hpp"

namespace grasskit {

// Jacobian of a graph x -> (x, f(x)) over R^p with values in R^q:
// J(i, alpha) = d f^alpha / d x^i.
struct GraphJacobianSample {
  Eigen::VectorXd x;
  Eigen::MatrixXd J;  // p x q
};

// Tangent plane of the graph, frame columns e_i + sum_alpha J(i, alpha) eta_alpha
// orthonormalized in order.
GrassPoint gauss_point(const GraphJacobianSample& s);
// The base plane e_1 ^ ... ^ e_p of R^(p+q).
GrassPoint base_plane(int p, int q);

// sqrt(det(I + J J^T)).
double slope(const Eigen::MatrixXd& J);
inline double slope(const GraphJacobianSample& s) { return slope(s.J); }

// |w_product(gauss_point(s), base) * slope(s) - 1|.
double reciprocal_check(const GraphJacobianSample& s);

CheckReport hemisphere_report(std::span<const GraphJacobianSample> samples, double beta0);

// A graph given by its values and Jacobians.
struct GraphSampler {
  std::string name;
  int p = 0;
  int q = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;

  GraphJacobianSample sample(const Eigen::VectorXd& x) const { return {x, jacobian(x)}; }
};

// f_t(x) = f(t x) / t, so D f_t(x) = D f(t x).
GraphSampler blow_down(const GraphSampler& f, double t);

// f(x) = A x + b with A of shape q x p.
GraphSampler affine_sampler(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
// f(x1, x2) = (sin x1, cos x2).
GraphSampler sincos_sampler();
// f(x) = (|x|^2, 0) on R^p.
GraphSampler quadratic_sampler(int p);
// Small smooth codimension-2 graph over R^4 with slope at most 1.2.
GraphSampler perturbed_sampler();
// Builtin samplers by name: affine, sincos, quadratic, perturbed.
GraphSampler builtin_sampler(const std::string& name);

// Regular grid of points_per_axis^p samples over [-half_width, half_width]^p.
std::vector<GraphJacobianSample> scan_grid(const GraphSampler& f, double half_width, int points_per_axis);

// Rows "x_1 ... x_p ; J_11 ... J_1q J_21 ... J_pq"; blank lines and lines
// starting with '#' are skipped.
std::vector<GraphJacobianSample> read_jacobian_grid(std::istream& in);

// Largest pairwise distance between Gauss points (evenly subsampled beyond
// max_points samples).
double gauss_spread(std::span<const GraphJacobianSample> samples, std::size_t max_points = 1500);

// Codimension 2 only. epsilon defaults to asin(1/beta0 - 1e-6); an explicit
// epsilon must satisfy sin(epsilon) < 1/beta0.
CheckReport bernstein_verdict(std::span<const GraphJacobianSample> samples, double beta0,
                              std::optional<double> epsilon = std::nullopt);

}  // namespace grasskit
