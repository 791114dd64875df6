#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "grasskit/grassmann.hpp"
#include "grasskit/manifold.hpp"
#include "grasskit/report.hpp"

namespace grasskit {

class Region;

// Union of geodesic balls B(centers[j], radii[j]) sampled along a curve.
struct TubeAlongCurve {
  std::vector<double> params;
  std::vector<Point> centers;
  std::vector<double> radii;
};

// S^2 minus the closed epsilon-neighbourhood of the half great circle
// {x : <x, equator_normal> = 0, <x, pole> <= 0}.
struct SphereMinusHalfEquator {
  double epsilon = 0.0;
  Eigen::Vector3d equator_normal = Eigen::Vector3d::UnitY();
  Eigen::Vector3d pole = Eigen::Vector3d::UnitZ();
};

struct ProductRegion {
  std::shared_ptr<const Region> first;
  std::shared_ptr<const Region> second;
};

// Points x of G+(p,n) with w_product(x, center) > sin(epsilon).
struct HemisphereSlab {
  GrassPoint center;
  double epsilon = 0.0;
};

// Open geodesic ball.
struct GeodesicBall {
  Point center;
  double radius = 0.0;
};

// Arbitrary membership test, for fixtures and experiments.
struct PredicateRegion {
  std::string name;
  std::function<bool(const Point&)> test;
};

class Region {
 public:
  using Kind = std::variant<TubeAlongCurve, SphereMinusHalfEquator, ProductRegion, HemisphereSlab,
                            GeodesicBall, PredicateRegion>;

  // Every radius must lie in (0, convexity_radius).
  static Region tube(const Ambient& ambient, std::vector<double> params, std::vector<Point> centers,
                     std::vector<double> radii, double convexity_radius);
  static Region sphere_minus_half_equator(double epsilon,
                                          const Eigen::Vector3d& equator_normal = Eigen::Vector3d::UnitY(),
                                          const Eigen::Vector3d& pole = Eigen::Vector3d::UnitZ());
  // Both factors must be regions of spheres.
  static Region product(const Region& first, const Region& second);
  static Region hemisphere_slab(const GrassPoint& center, double epsilon);
  static Region ball(const Ambient& ambient, const Point& center, double radius);
  static Region predicate(const Ambient& ambient, std::string name,
                          std::function<bool(const Point&)> test);

  const Ambient& ambient() const { return ambient_; }
  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  // Throws DomainError when x is not a point of the ambient manifold.
  bool contains(const Point& x) const;
  // contains() without the on-manifold validation, for hot loops over
  // points the caller produced on the manifold.
  bool contains_unchecked(const Point& x) const;

 private:
  Region(Ambient ambient, Kind kind) : ambient_(ambient), kind_(std::move(kind)) {}

  Ambient ambient_;
  Kind kind_;
};

// Distance from x in S^2 to the removed half great circle.
double distance_to_half_equator(const SphereMinusHalfEquator& r, const Eigen::Vector3d& x);

// The tube of the S^2 example: Gamma(t) = (-cos(pi t), 0, sin(pi t)) on
// [0, 1] with constant radius pi/2 - epsilon/2, sampled at `samples` params.
Region half_equator_tube(double epsilon, int samples = 201);

// Point of the tube's sampled curve at index j.
const Point& tube_center(const Region& tube, std::size_t j);

// ---- nets -----------------------------------------------------------------

// Fibonacci points on S^2 with spacing close to `resolution`; restricted to
// the closed cap of the given radius around `center` when one is supplied.
std::vector<Point> sphere_net(double resolution);
std::vector<Point> sphere_cap_net(const Eigen::Vector3d& center, double cap_radius, double resolution);

// Square grid of spacing `resolution` covering the box of half width
// `half_width` around `center` in R^2.
std::vector<Point> plane_grid_net(const Eigen::Vector2d& center, double half_width, double resolution);

// Up to `count` random points of the region drawn by rejection from the
// ambient's uniform measure.
std::vector<Point> sample_region(const Region& region, std::size_t count, std::mt19937_64& rng,
                                 std::size_t max_attempts = 1000000);

// Neighbour graph on a point set: i ~ j when distance(i, j) < radius.
class NetGraph {
 public:
  NetGraph(const Ambient& ambient, std::vector<Point> nodes, double radius);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<std::pair<std::size_t, double>>& neighbours(std::size_t i) const { return adj_[i]; }
  // Nodes within `radius` of an arbitrary point, with their distances.
  std::vector<std::pair<std::size_t, double>> near(const Point& x) const;
  // Component label per node and the number of components.
  std::pair<std::vector<std::size_t>, std::size_t> components() const;
  // Single-source shortest path lengths (infinity when unreachable).
  std::vector<double> shortest_paths(std::span<const std::pair<std::size_t, double>> sources) const;

 private:
  Ambient ambient_;
  std::vector<Point> nodes_;
  double radius_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
};

// ---- verifiers ---------------------------------------------------------------

// R minus the closed ball at params[t0_index] must split into exactly two
// net components, holding the net points nearest to the curve's endpoints.
// Components of at most max(3, kept / 1000) points count as fragments.
CheckReport slab_disconnection_check(const Region& tube, std::size_t t0_index,
                                     std::span<const Point> net, double resolution);

struct KappaCrossing {
  double lo = 0.0;  // last sample before the sign change
  double hi = 0.0;  // first sample after it
};

struct KappaReport {
  std::vector<double> params;
  std::vector<double> values;  // dist(Gamma(t_j), y) - r(t_j)
  bool inside = false;         // some value is negative
  // First crossing from >= 0 to < 0, and first crossing back to >= 0 after
  // a negative sample.
  std::optional<KappaCrossing> entry;
  std::optional<KappaCrossing> exit;
};

KappaReport kappa(const Region& tube, const Point& y);

struct ExitSample {
  Point base;
  Tangent direction;
};

// Exit time of the geodesic from (p, v): marched with step h, refined by
// bisection; nullopt when it stays inside up to t_max.
std::optional<double> exit_time(const Region& region, const Point& p, const Tangent& v, double h,
                                double t_max);

CheckReport condition_i_check(const Region& region, std::span<const ExitSample> samples, double K,
                              double h = 1e-3);

struct ConditionIIReport {
  CheckReport report;
  double base_distance = 0.0;
  std::vector<double> distances;
  std::vector<bool> decreasing;
  bool proper = false;
  bool connected = false;
};

// Classifies each direction eta at q = gamma_{p,nu}(t) by whether moving
// eps_step along eta lowers the in-region distance to p. That distance is
// the ambient one when the minimizing ambient geodesic stays in R and a
// shortest path on the net graph (edge radius 2 * resolution) otherwise.
ConditionIIReport condition_ii_check(const Region& region, const Point& p, const Tangent& nu, double t,
                                     std::span<const Tangent> direction_net, double eps_step,
                                     std::span<const Point> net, double resolution);

// Directions tried at each base point by no_closed_geodesic_check.
std::vector<TangentCanonical> loop_probe_directions(const GrassPoint& center, const GrassPoint& base,
                                                    int mixes, std::mt19937_64& rng);

struct LoopVerdict {
  std::optional<double> period;  // closed_geodesic_period at k_max
  std::optional<double> exit;    // first marched time outside the region
  double last_inside = 0.0;      // last marched time still inside
};

// Marches the geodesic of X over one period (step at most h) looking for a
// point outside the region; no marching when no period is found.
LoopVerdict check_loop(const Region& region, const TangentCanonical& X, int k_max, double h = 1e-2);

CheckReport no_closed_geodesic_check(const Region& slab, std::span<const GrassPoint> bases, int k_max,
                                     int mixes = 8, std::uint64_t seed = 1, double h = 1e-2);

// Hemisphere slab around w in G+(p,p+2), epsilon in (0, pi/2).
Region build_codim2_region(const GrassPoint& w, double epsilon);

// Samples the union of closed B_G balls centred on the type-2 geodesics
// through w (|t| < t_X - epsilon) and reports how many fall in the slab.
CheckReport codim2_union_cross_check(const GrassPoint& w, double epsilon, std::size_t samples,
                                     std::uint64_t seed = 1);

}  // namespace grasskit
