#include "grasskit/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "grasskit/errors.hpp"
#include "grasskit/report.hpp"

namespace grasskit {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd normalized_or_throw(const Eigen::VectorXd& u) {
  const double len = u.norm();
  if (!(len > 1e-12)) throw DomainError("sphere projection of a zero vector");
  return u / len;
}

class SphereTarget final : public EmbeddedTarget {
 public:
  explicit SphereTarget(int m) : m_(m) {}
  std::string name() const override { return "S^" + std::to_string(m_); }
  int ambient_dim() const override { return m_ + 1; }
  Eigen::VectorXd project(const Eigen::VectorXd& u) const override { return normalized_or_throw(u); }
  Eigen::VectorXd tangent_project(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const override {
    return v - u * u.dot(v);
  }
  void project_columns(Eigen::MatrixXd& values) const override {
    for (Eigen::Index v = 0; v < values.cols(); ++v) {
      const double len = values.col(v).norm();
      if (!(len > 1e-12)) throw DomainError("sphere projection of a zero vector");
      values.col(v) /= len;
    }
  }
  Ambient manifold() const override { return Ambient::sphere(m_); }
  Point to_point(const Eigen::VectorXd& u) const override { return u; }

 private:
  int m_;
};

class SphereProductTarget final : public EmbeddedTarget {
 public:
  SphereProductTarget(int m1, int m2) : a_(m1 + 1), b_(m2 + 1) {}
  std::string name() const override {
    return "S^" + std::to_string(a_ - 1) + "xS^" + std::to_string(b_ - 1);
  }
  int ambient_dim() const override { return a_ + b_; }
  Eigen::VectorXd project(const Eigen::VectorXd& u) const override {
    Eigen::VectorXd out(a_ + b_);
    out << normalized_or_throw(u.head(a_)), normalized_or_throw(u.tail(b_));
    return out;
  }
  Eigen::VectorXd tangent_project(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const override {
    Eigen::VectorXd out(a_ + b_);
    out << v.head(a_) - u.head(a_) * u.head(a_).dot(v.head(a_)),
        v.tail(b_) - u.tail(b_) * u.tail(b_).dot(v.tail(b_));
    return out;
  }
  Ambient manifold() const override { return Ambient::sphere_product(a_ - 1, b_ - 1); }
  Point to_point(const Eigen::VectorXd& u) const override {
    return ProductPoint{u.head(a_), u.tail(b_)};
  }

 private:
  int a_;
  int b_;
};

class GrassmannTarget final : public EmbeddedTarget {
 public:
  GrassmannTarget(int p, int n) : p_(p), n_(n) {}
  std::string name() const override {
    return "G+(" + std::to_string(p_) + "," + std::to_string(n_) + ")";
  }
  int ambient_dim() const override { return n_ * p_; }
  Eigen::VectorXd project(const Eigen::VectorXd& u) const override {
    const Eigen::Map<const Eigen::MatrixXd> E(u.data(), n_, p_);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (!(svd.singularValues()(p_ - 1) > 1e-12)) throw DomainError("frame projection of a rank-deficient matrix");
    const Eigen::MatrixXd polar = svd.matrixU() * svd.matrixV().transpose();
    return Eigen::Map<const Eigen::VectorXd>(polar.data(), polar.size());
  }
  Eigen::VectorXd tangent_project(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const override {
    const Eigen::Map<const Eigen::MatrixXd> E(u.data(), n_, p_);
    const Eigen::Map<const Eigen::MatrixXd> V(v.data(), n_, p_);
    const Eigen::MatrixXd S = E.transpose() * V;
    const Eigen::MatrixXd T = V - E * (0.5 * (S + S.transpose()));
    return Eigen::Map<const Eigen::VectorXd>(T.data(), T.size());
  }
  Ambient manifold() const override { return Ambient::grassmannian(p_, n_); }
  Point to_point(const Eigen::VectorXd& u) const override {
    return GrassPoint(Eigen::MatrixXd(Eigen::Map<const Eigen::MatrixXd>(u.data(), n_, p_)));
  }

 private:
  int p_;
  int n_;
};

void require_columns(const DomainMesh& mesh, const Eigen::MatrixXd& values) {
  if (values.cols() != mesh.vertices()) throw DomainError("map has the wrong number of vertices");
}

void add_laplacian(const DomainMesh& mesh, const Eigen::MatrixXd& values, double scale, Eigen::MatrixXd& out) {
  for (const MeshEdge& e : mesh.edges()) {
    const double w = scale * e.weight;
    out.col(e.i) += w * (values.col(e.j) - values.col(e.i));
    out.col(e.j) += w * (values.col(e.i) - values.col(e.j));
  }
}

Eigen::MatrixXd laplacian(const DomainMesh& mesh, const Eigen::MatrixXd& values) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(values.rows(), values.cols());
  add_laplacian(mesh, values, 1.0, out);
  return out;
}

void check_step(const DomainMesh& mesh, double tau) {
  if (!(tau > 0.0) || tau > max_step(mesh)) {
    throw DomainError("flow_step: step must lie in (0, 0.2 / max_degree]");
  }
}

// values <- project(values + tau * L values), using `next` as scratch.
void advance(const DomainMesh& mesh, const EmbeddedTarget& target, double tau, Eigen::MatrixXd& values,
             Eigen::MatrixXd& next) {
  next = values;
  add_laplacian(mesh, values, tau, next);
  target.project_columns(next);
  values.swap(next);
}

bool region_holds(const Region& region, const EmbeddedTarget& target, const Eigen::MatrixXd& values) {
  for (Eigen::Index v = 0; v < values.cols(); ++v) {
    if (!region.contains_unchecked(target.to_point(values.col(v)))) return false;
  }
  return true;
}

}  // namespace

DomainMesh::DomainMesh(int vertices, std::vector<MeshEdge> edges, std::string description)
    : vertices_(vertices), edges_(std::move(edges)), description_(std::move(description)),
      adj_(static_cast<std::size_t>(std::max(vertices, 0))) {
  if (vertices < 1) throw DomainError("mesh needs at least one vertex");
  for (const MeshEdge& e : edges_) {
    if (e.i < 0 || e.j < 0 || e.i >= vertices || e.j >= vertices || e.i == e.j) {
      throw DomainError("mesh edge has invalid endpoints");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw DomainError("mesh weights must be positive");
    adj_[static_cast<std::size_t>(e.i)].push_back({e.j, e.weight});
    adj_[static_cast<std::size_t>(e.j)].push_back({e.i, e.weight});
  }
  for (const auto& a : adj_) max_degree_ = std::max(max_degree_, static_cast<int>(a.size()));
  // Connectivity by traversal from vertex 0.
  std::vector<bool> seen(adj_.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const Neighbour& nb : adj_[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(nb.vertex)]) {
        seen[static_cast<std::size_t>(nb.vertex)] = true;
        ++reached;
        stack.push_back(nb.vertex);
      }
    }
  }
  if (reached != adj_.size()) throw DomainError("mesh graph is not connected");
}

DomainMesh build_torus_mesh(int m) {
  if (m < 3) throw DomainError("build_torus_mesh: m must be at least 3");
  std::vector<MeshEdge> edges;
  edges.reserve(static_cast<std::size_t>(2 * m * m));
  for (int s = 0; s < m; ++s) {
    for (int t = 0; t < m; ++t) {
      const int v = s * m + t;
      edges.push_back({v, ((s + 1) % m) * m + t, 1.0});
      edges.push_back({v, s * m + (t + 1) % m, 1.0});
    }
  }
  return DomainMesh(m * m, std::move(edges), std::to_string(m) + "x" + std::to_string(m) + " periodic grid");
}

std::shared_ptr<const EmbeddedTarget> sphere_target(int m) {
  if (m < 1) throw DomainError("sphere_target: dimension must be positive");
  return std::make_shared<SphereTarget>(m);
}

std::shared_ptr<const EmbeddedTarget> sphere_product_target(int m1, int m2) {
  if (m1 < 1 || m2 < 1) throw DomainError("sphere_product_target: dimensions must be positive");
  return std::make_shared<SphereProductTarget>(m1, m2);
}

std::shared_ptr<const EmbeddedTarget> grassmann_target(int p, int n) {
  (void)Ambient::grassmannian(p, n);
  return std::make_shared<GrassmannTarget>(p, n);
}

double energy(const DomainMesh& mesh, const Eigen::MatrixXd& values) {
  require_columns(mesh, values);
  double total = 0.0;
  for (const MeshEdge& e : mesh.edges()) {
    total += e.weight * (values.col(e.i) - values.col(e.j)).squaredNorm();
  }
  return 0.5 * total;
}

TensionField tension(const DomainMesh& mesh, const EmbeddedTarget& target, const Eigen::MatrixXd& values) {
  require_columns(mesh, values);
  if (values.rows() != target.ambient_dim()) throw DomainError("map has the wrong ambient dimension");
  TensionField out;
  out.vectors = laplacian(mesh, values);
  for (Eigen::Index v = 0; v < values.cols(); ++v) {
    out.vectors.col(v) = target.tangent_project(values.col(v), out.vectors.col(v));
    out.norm = std::max(out.norm, out.vectors.col(v).norm());
  }
  return out;
}

MapState make_state(const DomainMesh& mesh, const EmbeddedTarget& target, Eigen::MatrixXd values, double tol) {
  require_columns(mesh, values);
  if (values.rows() != target.ambient_dim()) throw DomainError("map has the wrong ambient dimension");
  if (!values.allFinite()) throw DomainError("map has non-finite values");
  for (Eigen::Index v = 0; v < values.cols(); ++v) {
    const Eigen::VectorXd projected = target.project(values.col(v));
    if ((projected - values.col(v)).norm() > tol) {
      throw DomainError("initial value at vertex " + std::to_string(v) + " is off the target");
    }
    values.col(v) = projected;
  }
  MapState state;
  state.energy = energy(mesh, values);
  state.tension_norm = tension(mesh, target, values).norm;
  state.values = std::move(values);
  return state;
}

double default_step(const DomainMesh& mesh) { return 0.1 / std::max(1, mesh.max_degree()); }
double max_step(const DomainMesh& mesh) { return 0.2 / std::max(1, mesh.max_degree()); }

void EmbeddedTarget::project_columns(Eigen::MatrixXd& values) const {
  for (Eigen::Index v = 0; v < values.cols(); ++v) values.col(v) = project(values.col(v));
}

MapState flow_step(const DomainMesh& mesh, const EmbeddedTarget& target, const MapState& state, double tau) {
  check_step(mesh, tau);
  require_columns(mesh, state.values);
  MapState out;
  out.values = state.values;
  Eigen::MatrixXd scratch;
  advance(mesh, target, tau, out.values, scratch);
  out.energy = energy(mesh, out.values);
  out.tension_norm = tension(mesh, target, out.values).norm;
  return out;
}

double image_diameter(const Eigen::MatrixXd& values) {
  double best = 0.0;
  const Eigen::Index n = values.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      best = std::max(best, (values.col(i) - values.col(j)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::kCollapsed: return "collapsed to constant";
    case Classification::kNearHarmonic: return "nonconstant near-harmonic";
    case Classification::kBudgetExhausted: return "budget exhausted";
  }
  return "?";
}

nlohmann::json ExperimentReport::summary() const {
  nlohmann::json out = {
      {"classification", to_string(classification)},
      {"steps", steps},
      {"tau", tau},
      {"target", target},
      {"mesh", mesh},
      {"region", region},
      {"energy_monotone", energy_monotone},
      {"final_energy", final_state.energy},
      {"final_tension_norm", final_state.tension_norm},
      {"final_diameter", trace.empty() ? 0.0 : trace.back().diameter},
      {"first_region_exit", first_region_exit ? nlohmann::json(*first_region_exit) : nlohmann::json(nullptr)},
      {"note", "sampled evidence on a torus domain, not a proof"}};
  return out;
}

std::string ExperimentReport::trace_csv() const {
  std::ostringstream os;
  os << "step,energy,tension_norm,diameter,in_region\n";
  for (const TraceRow& r : trace) {
    os << r.step << ',' << format_double(r.energy) << ',' << format_double(r.tension_norm) << ','
       << format_double(r.diameter) << ',' << (r.in_region ? 1 : 0) << '\n';
  }
  return os.str();
}

ExperimentReport run_experiment(const DomainMesh& mesh, const EmbeddedTarget& target, const Eigen::MatrixXd& initial,
                                const Region* region, const ExperimentBudget& budget) {
  if (budget.max_steps < 0 || budget.monitor_every < 1) throw DomainError("run_experiment: invalid budget");
  if (region != nullptr && !(region->ambient() == target.manifold())) {
    throw DomainError("run_experiment: region lives on a different manifold than the target");
  }
  ExperimentReport report;
  report.tau = budget.tau > 0.0 ? budget.tau : default_step(mesh);
  report.target = target.name();
  report.mesh = mesh.description();
  report.region = region != nullptr ? region->kind_name() : "none";
  MapState state = make_state(mesh, target, initial);
  if (region != nullptr && !region_holds(*region, target, state.values)) {
    throw DomainError("run_experiment: initial image is not inside the region");
  }

  check_step(mesh, report.tau);
  double window_energy = state.energy;
  auto monitor = [&](long step) {
    state.tension_norm = tension(mesh, target, state.values).norm;
    TraceRow row;
    row.step = step;
    row.energy = state.energy;
    row.tension_norm = state.tension_norm;
    row.diameter = image_diameter(state.values);
    row.in_region = region == nullptr || region_holds(*region, target, state.values);
    if (!row.in_region && !report.first_region_exit) report.first_region_exit = step;
    report.trace.push_back(row);
    if (row.diameter < budget.collapse_diameter) return Classification::kCollapsed;
    const double change = std::abs(window_energy - state.energy) / std::max(state.energy, 1e-300);
    const bool stalled = step > 0 && change < budget.stall_tolerance;
    window_energy = state.energy;
    if (state.tension_norm < budget.harmonic_tension && stalled) return Classification::kNearHarmonic;
    return Classification::kBudgetExhausted;
  };

  Eigen::MatrixXd scratch;
  long step = 0;
  for (;; ++step) {
    if (step % budget.monitor_every == 0 || step == budget.max_steps) {
      const Classification c = monitor(step);
      if (c != Classification::kBudgetExhausted) {
        report.classification = c;
        break;
      }
    }
    if (step == budget.max_steps) break;
    advance(mesh, target, report.tau, state.values, scratch);
    const double e = energy(mesh, state.values);
    if (e > state.energy + 1e-12) report.energy_monotone = false;
    state.energy = e;
    if (region != nullptr && !report.first_region_exit && !region_holds(*region, target, state.values)) {
      report.first_region_exit = step + 1;
    }
  }
  report.steps = step;
  report.final_state = std::move(state);
  return report;
}

Eigen::MatrixXd constant_map(int m, const Eigen::VectorXd& value) {
  if (m < 1) throw DomainError("constant_map: m must be positive");
  return value.replicate(1, m * m);
}

Eigen::MatrixXd cap_winding_map(int m, double polar_lo, double polar_hi) {
  if (m < 1 || !(polar_lo <= polar_hi)) throw DomainError("cap_winding_map: invalid parameters");
  Eigen::MatrixXd out(3, m * m);
  const double mid = 0.5 * (polar_lo + polar_hi);
  const double amp = 0.5 * (polar_hi - polar_lo);
  for (int s = 0; s < m; ++s) {
    for (int t = 0; t < m; ++t) {
      const double theta = mid + amp * std::sin(2 * kPi * t / m);
      const double phi = 2 * kPi * s / m;
      out.col(s * m + t) << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
    }
  }
  return out;
}

Eigen::MatrixXd equator_wrap_map(int m) {
  if (m < 1) throw DomainError("equator_wrap_map: m must be positive");
  Eigen::MatrixXd out(3, m * m);
  for (int s = 0; s < m; ++s) {
    for (int t = 0; t < m; ++t) {
      out.col(s * m + t) << std::cos(2 * kPi * s / m), std::sin(2 * kPi * s / m), 0.0;
    }
  }
  return out;
}

Eigen::MatrixXd product_cap_map(int m, double polar_lo, double polar_hi) {
  const Eigen::MatrixXd one = cap_winding_map(m, polar_lo, polar_hi);
  Eigen::MatrixXd out(6, m * m);
  out.topRows(3) = one;
  // Second factor winds along t instead of s.
  for (int s = 0; s < m; ++s) {
    for (int t = 0; t < m; ++t) out.block(3, s * m + t, 3, 1) = one.col(t * m + s);
  }
  return out;
}

Eigen::MatrixXd random_map(int m, const EmbeddedTarget& target, std::uint64_t seed) {
  if (m < 1) throw DomainError("random_map: m must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd out(target.ambient_dim(), m * m);
  for (int v = 0; v < m * m; ++v) {
    Eigen::VectorXd g(target.ambient_dim());
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = gauss(rng);
    out.col(v) = target.project(g);
  }
  return out;
}

}  // namespace grasskit
