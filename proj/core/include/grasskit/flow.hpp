#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "grasskit/manifold.hpp"
#include "grasskit/regions.hpp"

namespace grasskit {

struct MeshEdge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

// Weighted graph standing in for a closed Riemannian domain.
class DomainMesh {
 public:
  // Rejects non-positive weights, self loops, out-of-range ids and
  // disconnected graphs.
  DomainMesh(int vertices, std::vector<MeshEdge> edges, std::string description);

  int vertices() const { return vertices_; }
  const std::vector<MeshEdge>& edges() const { return edges_; }
  const std::string& description() const { return description_; }
  int max_degree() const { return max_degree_; }

  struct Neighbour {
    int vertex;
    double weight;
  };
  const std::vector<Neighbour>& neighbours(int v) const { return adj_[static_cast<std::size_t>(v)]; }

 private:
  int vertices_;
  std::vector<MeshEdge> edges_;
  std::string description_;
  std::vector<std::vector<Neighbour>> adj_;
  int max_degree_ = 0;
};

// m x m periodic grid, vertex (s, t) has id s * m + t, unit weights.
DomainMesh build_torus_mesh(int m);

// Target manifold inside R^L given by a nearest-point projection.
class EmbeddedTarget {
 public:
  virtual ~EmbeddedTarget() = default;
  virtual std::string name() const = 0;
  virtual int ambient_dim() const = 0;
  virtual Eigen::VectorXd project(const Eigen::VectorXd& u) const = 0;
  virtual Eigen::VectorXd tangent_project(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const = 0;
  // project() applied to every column in place.
  virtual void project_columns(Eigen::MatrixXd& values) const;
  // Manifold descriptor and point conversion used for region membership.
  virtual Ambient manifold() const = 0;
  virtual Point to_point(const Eigen::VectorXd& u) const = 0;
};

std::shared_ptr<const EmbeddedTarget> sphere_target(int m);
std::shared_ptr<const EmbeddedTarget> sphere_product_target(int m1, int m2);
// Frames of G+(p,n) as column-major n*p vectors, projected by the polar factor.
std::shared_ptr<const EmbeddedTarget> grassmann_target(int p, int n);

struct MapState {
  Eigen::MatrixXd values;  // ambient_dim x vertices
  double energy = 0.0;
  double tension_norm = 0.0;
};

double energy(const DomainMesh& mesh, const Eigen::MatrixXd& values);

struct TensionField {
  Eigen::MatrixXd vectors;
  double norm = 0.0;  // max over vertices
};

TensionField tension(const DomainMesh& mesh, const EmbeddedTarget& target, const Eigen::MatrixXd& values);

// Validates every column against the target (|project(u) - u| <= tol) and
// fills in energy and tension.
MapState make_state(const DomainMesh& mesh, const EmbeddedTarget& target, Eigen::MatrixXd values,
                    double tol = 1e-8);

double default_step(const DomainMesh& mesh);
double max_step(const DomainMesh& mesh);

// One projected explicit Euler step; tau must lie in (0, max_step(mesh)].
MapState flow_step(const DomainMesh& mesh, const EmbeddedTarget& target, const MapState& state, double tau);

// Largest ambient distance between two vertex values.
double image_diameter(const Eigen::MatrixXd& values);

struct ExperimentBudget {
  long max_steps = 200000;
  double tau = 0.0;  // 0 picks default_step(mesh)
  long monitor_every = 100;
  double collapse_diameter = 1e-3;
  double harmonic_tension = 1e-3;
  // Relative energy change over one monitor window below which the flow
  // counts as stalled.
  double stall_tolerance = 1e-8;
};

enum class Classification { kCollapsed, kNearHarmonic, kBudgetExhausted };

std::string to_string(Classification c);

struct TraceRow {
  long step = 0;
  double energy = 0.0;
  double tension_norm = 0.0;
  double diameter = 0.0;
  bool in_region = true;
};

struct ExperimentReport {
  Classification classification = Classification::kBudgetExhausted;
  long steps = 0;
  double tau = 0.0;
  std::vector<TraceRow> trace;
  std::optional<long> first_region_exit;
  bool energy_monotone = true;
  MapState final_state;
  std::string target;
  std::string mesh;
  std::string region;

  nlohmann::json summary() const;
  std::string trace_csv() const;
};

// Throws DomainError when the initial map is off the target or, with a
// region, not inside it.
ExperimentReport run_experiment(const DomainMesh& mesh, const EmbeddedTarget& target, const Eigen::MatrixXd& initial,
                                const Region* region, const ExperimentBudget& budget);

// ---- initial maps on the m x m torus --------------------------------------------

Eigen::MatrixXd constant_map(int m, const Eigen::VectorXd& value);
// Polar angle in [polar_lo, polar_hi] oscillating along t, azimuth winding
// once along s.
Eigen::MatrixXd cap_winding_map(int m, double polar_lo, double polar_hi);
// (s, t) -> (cos(2 pi s/m), sin(2 pi s/m), 0).
Eigen::MatrixXd equator_wrap_map(int m);
// Same cap map in both factors of S^2 x S^2.
Eigen::MatrixXd product_cap_map(int m, double polar_lo, double polar_hi);
// Independent uniform points of the target.
Eigen::MatrixXd random_map(int m, const EmbeddedTarget& target, std::uint64_t seed);

}  // namespace grasskit
