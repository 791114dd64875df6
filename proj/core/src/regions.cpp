#include "grasskit/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "grasskit/errors.hpp"

namespace grasskit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

const TubeAlongCurve& require_tube(const Region& r) {
  const auto* t = std::get_if<TubeAlongCurve>(&r.kind());
  if (t == nullptr) throw DomainError("expected a tube region, got " + r.kind_name());
  return *t;
}

bool is_sphere_ambient(const Ambient& a) { return a.kind == AmbientKind::kSphere; }

nlohmann::json point_json(const Point& x) {
  if (const auto* v = std::get_if<Eigen::VectorXd>(&x)) {
    return std::vector<double>(v->data(), v->data() + v->size());
  }
  if (const auto* pp = std::get_if<ProductPoint>(&x)) {
    return {{"first", std::vector<double>(pp->first.data(), pp->first.data() + pp->first.size())},
            {"second", std::vector<double>(pp->second.data(), pp->second.data() + pp->second.size())}};
  }
  const auto& g = std::get<GrassPoint>(x);
  const MultiVector psi = g.plucker();
  return {{"plucker", std::vector<double>(psi.coeffs().begin(), psi.coeffs().end())}};
}

nlohmann::json tangent_json(const Tangent& v) {
  if (const auto* a = std::get_if<Eigen::VectorXd>(&v)) {
    return std::vector<double>(a->data(), a->data() + a->size());
  }
  return {{"lambda", std::get<TangentCanonical>(v).lambda}};
}

// Coordinates usable for spatial hashing: vector points only.
const Eigen::VectorXd* hash_coords(const Point& x) { return std::get_if<Eigen::VectorXd>(&x); }

struct CellKey {
  std::int64_t c[3] = {0, 0, 0};
  bool operator==(const CellKey& o) const { return c[0] == o.c[0] && c[1] == o.c[1] && c[2] == o.c[2]; }
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::int64_t v : k.c) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

CellKey cell_of(const Eigen::VectorXd& v, double cell) {
  CellKey k;
  for (Eigen::Index i = 0; i < v.size() && i < 3; ++i) {
    k.c[i] = static_cast<std::int64_t>(std::floor(v(i) / cell));
  }
  return k;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

// ---- Region -------------------------------------------------------------------

Region Region::tube(const Ambient& ambient, std::vector<double> params, std::vector<Point> centers,
                    std::vector<double> radii, double convexity_radius) {
  if (params.empty() || params.size() != centers.size() || params.size() != radii.size()) {
    throw DomainError("tube: params, centers and radii must be non-empty and of equal length");
  }
  for (std::size_t j = 0; j < params.size(); ++j) {
    if (j > 0 && !(params[j] > params[j - 1])) throw DomainError("tube: params must increase");
    if (!(radii[j] > 0.0) || !(radii[j] < convexity_radius)) {
      throw DomainError("tube: radius " + std::to_string(radii[j]) +
                        " outside (0, convexity radius)");
    }
    require_on_manifold(ambient, centers[j]);
  }
  return Region(ambient, TubeAlongCurve{std::move(params), std::move(centers), std::move(radii)});
}

Region Region::sphere_minus_half_equator(double epsilon, const Eigen::Vector3d& equator_normal,
                                         const Eigen::Vector3d& pole) {
  if (!(epsilon >= 0.0) || !(epsilon < kPi / 2)) {
    throw DomainError("sphere_minus_half_equator: epsilon must lie in [0, pi/2)");
  }
  if (std::abs(equator_normal.norm() - 1.0) > 1e-10 || std::abs(pole.norm() - 1.0) > 1e-10 ||
      std::abs(equator_normal.dot(pole)) > 1e-10) {
    throw DomainError("sphere_minus_half_equator: normal and pole must be orthonormal");
  }
  return Region(Ambient::sphere(2), SphereMinusHalfEquator{epsilon, equator_normal, pole});
}

Region Region::product(const Region& first, const Region& second) {
  if (!is_sphere_ambient(first.ambient()) || !is_sphere_ambient(second.ambient())) {
    throw DomainError("product: both factors must be sphere regions");
  }
  const Ambient amb = Ambient::sphere_product(first.ambient().a - 1, second.ambient().a - 1);
  return Region(amb, ProductRegion{std::make_shared<const Region>(first),
                                   std::make_shared<const Region>(second)});
}

Region Region::hemisphere_slab(const GrassPoint& center, double epsilon) {
  if (!(epsilon >= 0.0) || !(epsilon < kPi / 2)) {
    throw DomainError("hemisphere_slab: epsilon must lie in [0, pi/2)");
  }
  return Region(Ambient::grassmannian(center.p(), center.n()), HemisphereSlab{center, epsilon});
}

Region Region::ball(const Ambient& ambient, const Point& center, double radius) {
  require_on_manifold(ambient, center);
  if (!(radius > 0.0)) throw DomainError("ball: radius must be positive");
  return Region(ambient, GeodesicBall{center, radius});
}

Region Region::predicate(const Ambient& ambient, std::string name,
                         std::function<bool(const Point&)> test) {
  if (!test) throw DomainError("predicate: empty membership test");
  return Region(ambient, PredicateRegion{std::move(name), std::move(test)});
}

std::string Region::kind_name() const {
  struct Namer {
    std::string operator()(const TubeAlongCurve&) const { return "tube"; }
    std::string operator()(const SphereMinusHalfEquator&) const { return "sphere_minus_half_equator"; }
    std::string operator()(const ProductRegion&) const { return "product"; }
    std::string operator()(const HemisphereSlab&) const { return "hemisphere_slab"; }
    std::string operator()(const GeodesicBall&) const { return "ball"; }
    std::string operator()(const PredicateRegion& p) const { return "predicate:" + p.name; }
  };
  return std::visit(Namer{}, kind_);
}

bool Region::contains(const Point& x) const {
  require_on_manifold(ambient_, x);
  return contains_unchecked(x);
}

bool Region::contains_unchecked(const Point& x) const {
  if (const auto* t = std::get_if<TubeAlongCurve>(&kind_)) {
    for (std::size_t j = 0; j < t->centers.size(); ++j) {
      if (distance(ambient_, t->centers[j], x) < t->radii[j]) return true;
    }
    return false;
  }
  if (const auto* s = std::get_if<SphereMinusHalfEquator>(&kind_)) {
    return distance_to_half_equator(*s, std::get<Eigen::VectorXd>(x)) > s->epsilon;
  }
  if (const auto* pr = std::get_if<ProductRegion>(&kind_)) {
    const auto& pp = std::get<ProductPoint>(x);
    return pr->first->contains_unchecked(pp.first) && pr->second->contains_unchecked(pp.second);
  }
  if (const auto* h = std::get_if<HemisphereSlab>(&kind_)) {
    return w_product(std::get<GrassPoint>(x), h->center) > std::sin(h->epsilon);
  }
  if (const auto* b = std::get_if<GeodesicBall>(&kind_)) {
    return distance(ambient_, b->center, x) < b->radius;
  }
  return std::get<PredicateRegion>(kind_).test(x);
}

double distance_to_half_equator(const SphereMinusHalfEquator& r, const Eigen::Vector3d& x) {
  const Eigen::Vector3d& a = r.equator_normal;
  const Eigen::Vector3d xp = x - a * a.dot(x);
  const double len = xp.norm();
  if (len < 1e-15) return kPi / 2;
  if (xp.dot(r.pole) <= 0.0) return std::atan2(std::abs(a.dot(x)), len);
  // Nearest point is one of the arc's endpoints +-(a x pole).
  const Eigen::Vector3d d = a.cross(r.pole);
  return std::acos(std::clamp(std::abs(x.dot(d)), 0.0, 1.0));
}

Region half_equator_tube(double epsilon, int samples) {
  if (!(epsilon > 0.0) || !(epsilon < kPi)) throw DomainError("half_equator_tube: epsilon in (0, pi)");
  if (samples < 2) throw DomainError("half_equator_tube: need at least two samples");
  std::vector<double> params;
  std::vector<Point> centers;
  std::vector<double> radii;
  for (int j = 0; j < samples; ++j) {
    const double t = static_cast<double>(j) / (samples - 1);
    params.push_back(t);
    centers.emplace_back(Eigen::VectorXd(Eigen::Vector3d(-std::cos(kPi * t), 0.0, std::sin(kPi * t))));
    radii.push_back(kPi / 2 - epsilon / 2);
  }
  return Region::tube(Ambient::sphere(2), std::move(params), std::move(centers), std::move(radii), kPi / 2);
}

const Point& tube_center(const Region& tube, std::size_t j) { return require_tube(tube).centers.at(j); }

// ---- nets -------------------------------------------------------------------------

std::vector<Point> sphere_net(double resolution) {
  if (!(resolution > 0.0)) throw DomainError("sphere_net: resolution must be positive");
  const auto count = static_cast<std::size_t>(std::ceil(4.0 * kPi / (resolution * resolution)));
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(k);
    out.emplace_back(Eigen::VectorXd(Eigen::Vector3d(rho * std::cos(phi), rho * std::sin(phi), z)));
  }
  return out;
}

std::vector<Point> sphere_cap_net(const Eigen::Vector3d& center, double cap_radius, double resolution) {
  if (std::abs(center.norm() - 1.0) > 1e-8) throw DomainError("sphere_cap_net: center must be a unit vector");
  std::vector<Point> out;
  for (auto& x : sphere_net(resolution)) {
    const auto& v = std::get<Eigen::VectorXd>(x);
    if (std::acos(std::clamp(v.dot(center), -1.0, 1.0)) <= cap_radius) out.push_back(std::move(x));
  }
  return out;
}

std::vector<Point> plane_grid_net(const Eigen::Vector2d& center, double half_width, double resolution) {
  if (!(resolution > 0.0) || !(half_width > 0.0)) throw DomainError("plane_grid_net: sizes must be positive");
  const int k = static_cast<int>(std::ceil(half_width / resolution));
  std::vector<Point> out;
  for (int i = -k; i <= k; ++i) {
    for (int j = -k; j <= k; ++j) {
      out.emplace_back(Eigen::VectorXd(center + resolution * Eigen::Vector2d(i, j)));
    }
  }
  return out;
}

std::vector<Point> sample_region(const Region& region, std::size_t count, std::mt19937_64& rng,
                                 std::size_t max_attempts) {
  std::vector<Point> out;
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count; ++attempt) {
    Point x = random_point(region.ambient(), rng);
    if (region.contains_unchecked(x)) out.push_back(std::move(x));
  }
  return out;
}

// ---- NetGraph -----------------------------------------------------------------------

NetGraph::NetGraph(const Ambient& ambient, std::vector<Point> nodes, double radius)
    : ambient_(ambient), nodes_(std::move(nodes)), radius_(radius), adj_(nodes_.size()) {
  if (!(radius > 0.0)) throw DomainError("NetGraph: radius must be positive");
  const bool hashable = !nodes_.empty() && hash_coords(nodes_.front()) != nullptr &&
                        hash_coords(nodes_.front())->size() <= 3;
  if (!hashable) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
        const double d = distance(ambient_, nodes_[i], nodes_[j]);
        if (d < radius_) {
          adj_[i].emplace_back(j, d);
          adj_[j].emplace_back(i, d);
        }
      }
    }
    return;
  }
  // Chordal distance never exceeds geodesic distance on spheres, so a cell
  // size of `radius` in coordinates finds every neighbour.
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    cells[cell_of(*hash_coords(nodes_[i]), radius_)].push_back(i);
  }
  const int dims = static_cast<int>(hash_coords(nodes_.front())->size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const CellKey base = cell_of(*hash_coords(nodes_[i]), radius_);
    const int span0 = 1;
    const int span1 = dims > 1 ? 1 : 0;
    const int span2 = dims > 2 ? 1 : 0;
    for (int a = -span0; a <= span0; ++a) {
      for (int b = -span1; b <= span1; ++b) {
        for (int c = -span2; c <= span2; ++c) {
          CellKey k = base;
          k.c[0] += a;
          k.c[1] += b;
          k.c[2] += c;
          auto it = cells.find(k);
          if (it == cells.end()) continue;
          for (std::size_t j : it->second) {
            if (j <= i) continue;
            const double d = distance(ambient_, nodes_[i], nodes_[j]);
            if (d < radius_) {
              adj_[i].emplace_back(j, d);
              adj_[j].emplace_back(i, d);
            }
          }
        }
      }
    }
  }
}

std::vector<std::pair<std::size_t, double>> NetGraph::near(const Point& x) const {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double d = distance(ambient_, nodes_[i], x);
    if (d < radius_) out.emplace_back(i, d);
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::size_t> NetGraph::components() const {
  UnionFind uf(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (const auto& [j, d] : adj_[i]) uf.unite(i, j);
  }
  std::vector<std::size_t> label(nodes_.size());
  std::unordered_map<std::size_t, std::size_t> ids;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto [it, inserted] = ids.try_emplace(uf.find(i), ids.size());
    label[i] = it->second;
  }
  return {label, ids.size()};
}

std::vector<double> NetGraph::shortest_paths(std::span<const std::pair<std::size_t, double>> sources) const {
  std::vector<double> dist_to(nodes_.size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (const auto& [i, d] : sources) {
    if (d < dist_to[i]) {
      dist_to[i] = d;
      queue.emplace(d, i);
    }
  }
  while (!queue.empty()) {
    const auto [d, i] = queue.top();
    queue.pop();
    if (d > dist_to[i]) continue;
    for (const auto& [j, w] : adj_[i]) {
      if (d + w < dist_to[j]) {
        dist_to[j] = d + w;
        queue.emplace(dist_to[j], j);
      }
    }
  }
  return dist_to;
}

// ---- verifiers ------------------------------------------------------------------------

CheckReport slab_disconnection_check(const Region& tube, std::size_t t0_index, std::span<const Point> net,
                                     double resolution) {
  const TubeAlongCurve& t = require_tube(tube);
  if (net.empty()) throw DomainError("slab_disconnection_check: empty net");
  if (t0_index >= t.params.size()) throw DomainError("slab_disconnection_check: t0 index out of range");
  const double min_radius = *std::min_element(t.radii.begin(), t.radii.end());
  if (!(resolution > 0.0) || !(resolution < min_radius / 4)) {
    throw DomainError("slab_disconnection_check: resolution must be finer than min radius / 4");
  }
  const Ambient& amb = tube.ambient();
  const Point& c0 = t.centers[t0_index];
  const double r0 = t.radii[t0_index];
  std::vector<Point> kept;
  for (const Point& x : net) {
    if (tube.contains(x) && distance(amb, c0, x) > r0) kept.push_back(x);
  }

  CheckReport report;
  report.check = "slab_disconnection";
  report.samples = net.size();
  report.parameters = {{"t0", t.params[t0_index]}, {"resolution", resolution},
                       {"edge_radius", 2 * resolution}, {"net_size", net.size()}};
  if (kept.empty()) {
    report.passed = false;
    report.worst_case = {{"components", 0}, {"kept_points", 0}};
    return report;
  }
  const NetGraph graph(amb, std::move(kept), 2 * resolution);
  const auto [label, count] = graph.components();
  auto nearest = [&](const Point& target) {
    std::size_t best = 0;
    double best_d = kInf;
    for (std::size_t i = 0; i < graph.size(); ++i) {
      const double d = distance(amb, graph.nodes()[i], target);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };
  const std::size_t ia = nearest(t.centers.front());
  const std::size_t ib = nearest(t.centers.back());
  std::vector<std::size_t> sizes(count, 0);
  for (std::size_t l : label) ++sizes[l];
  // Net points stranded in cusps where the tube boundary meets the removed
  // ball form tiny components; they are reported but not counted.
  const std::size_t fragment_limit = std::max<std::size_t>(3, graph.size() / 1000);
  std::size_t major = 0;
  std::size_t fragments = 0;
  for (std::size_t sz : sizes) (sz > fragment_limit ? major : fragments) += 1;
  const bool separated = label[ia] != label[ib];
  report.passed = major == 2 && separated && sizes[label[ia]] > fragment_limit && sizes[label[ib]] > fragment_limit;
  report.worst_case = {{"components", count},
                       {"major_components", major},
                       {"fragments", fragments},
                       {"fragment_limit", fragment_limit},
                       {"kept_points", graph.size()},
                       {"component_sizes", sizes},
                       {"start_and_end_separated", separated}};
  return report;
}

KappaReport kappa(const Region& tube, const Point& y) {
  const TubeAlongCurve& t = require_tube(tube);
  require_on_manifold(tube.ambient(), y);
  KappaReport out;
  out.params = t.params;
  out.values.reserve(t.params.size());
  for (std::size_t j = 0; j < t.params.size(); ++j) {
    out.values.push_back(distance(tube.ambient(), t.centers[j], y) - t.radii[j]);
  }
  bool seen_negative = false;
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    const bool neg = out.values[j] < 0.0;
    if (j > 0) {
      const bool prev_neg = out.values[j - 1] < 0.0;
      if (!prev_neg && neg && !out.entry) out.entry = KappaCrossing{t.params[j - 1], t.params[j]};
      if (prev_neg && !neg && seen_negative && !out.exit) out.exit = KappaCrossing{t.params[j - 1], t.params[j]};
    }
    seen_negative = seen_negative || neg;
  }
  out.inside = seen_negative;
  return out;
}

std::optional<double> exit_time(const Region& region, const Point& p, const Tangent& v, double h,
                                double t_max) {
  if (!(h > 0.0)) throw DomainError("exit_time: step must be positive");
  const Ambient& amb = region.ambient();
  if (!region.contains_unchecked(p)) return 0.0;
  double lo = 0.0;
  for (double t = h; t <= t_max + 0.5 * h; t += h) {
    if (!region.contains_unchecked(geodesic_point(amb, p, v, t))) {
      double hi = t;
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (region.contains_unchecked(geodesic_point(amb, p, v, mid))) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return hi;
    }
    lo = t;
  }
  return std::nullopt;
}

CheckReport condition_i_check(const Region& region, std::span<const ExitSample> samples, double K, double h) {
  if (!(K > 0.0)) throw DomainError("condition_i_check: K must be positive");
  const Ambient& amb = region.ambient();
  CheckReport report;
  report.check = "condition_i";
  report.samples = samples.size();
  report.parameters = {{"K", K}, {"step", h}, {"t_max", 10 * K}, {"region", region.kind_name()}};
  double worst = 0.0;
  std::size_t worst_index = 0;
  std::size_t never_exits = 0;
  bool passed = true;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ExitSample& s = samples[i];
    if (!region.contains(s.base)) throw DomainError("condition_i_check: sample base point outside the region");
    if (std::abs(tangent_norm(amb, s.direction) - 1.0) > 1e-8) {
      throw DomainError("condition_i_check: sample direction is not a unit tangent");
    }
    const auto exit = exit_time(region, s.base, s.direction, h, 10 * K);
    const double e = exit.value_or(kInf);
    if (!exit) ++never_exits;
    if (e > K) passed = false;
    if (i == 0 || e > worst) {
      worst = e;
      worst_index = i;
    }
  }
  report.passed = passed;
  if (!samples.empty()) {
    report.worst_case = {{"max_exit_time", std::isinf(worst) ? nlohmann::json("never") : nlohmann::json(worst)},
                         {"sample_index", worst_index},
                         {"base", point_json(samples[worst_index].base)},
                         {"direction", tangent_json(samples[worst_index].direction)},
                         {"never_exits", never_exits}};
  }
  return report;
}

ConditionIIReport condition_ii_check(const Region& region, const Point& p, const Tangent& nu, double t,
                                     std::span<const Tangent> direction_net, double eps_step,
                                     std::span<const Point> net, double resolution) {
  if (direction_net.size() < 8) throw DomainError("condition_ii_check: direction net needs at least 8 directions");
  if (!(eps_step > 0.0) || !(resolution > 0.0)) throw DomainError("condition_ii_check: steps must be positive");
  const Ambient& amb = region.ambient();
  if (!region.contains(p)) throw DomainError("condition_ii_check: p outside the region");
  if (std::abs(tangent_norm(amb, nu) - 1.0) > 1e-8) throw DomainError("condition_ii_check: nu must be a unit tangent");
  const Point q = geodesic_point(amb, p, nu, t);
  if (!region.contains_unchecked(q)) throw DomainError("condition_ii_check: t is past the first exit time");

  std::vector<Point> inside;
  for (const Point& x : net) {
    if (region.contains(x)) inside.push_back(x);
  }
  const NetGraph graph(amb, std::move(inside), 2 * resolution);
  const auto sources = graph.near(p);
  const std::vector<double> from_p = graph.shortest_paths(sources);

  auto region_distance = [&](const Point& x) {
    try {
      const Tangent v = connecting_tangent(amb, p, x);
      const double len = tangent_norm(amb, v);
      const int pieces = std::max(1, static_cast<int>(std::ceil(len / (0.5 * resolution))));
      bool clear = true;
      for (int k = 1; k < pieces && clear; ++k) {
        clear = region.contains_unchecked(geodesic_point(amb, p, v, static_cast<double>(k) / pieces));
      }
      if (clear) return len;
    } catch (const DomainError&) {
      // Cut point: fall through to the net graph.
    }
    double best = kInf;
    for (const auto& [i, d] : graph.near(x)) best = std::min(best, d + from_p[i]);
    return best;
  };

  ConditionIIReport out;
  out.base_distance = region_distance(q);
  const std::size_t m = direction_net.size();
  out.distances.resize(m);
  out.decreasing.assign(m, false);
  std::size_t count = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const Point moved = geodesic_point(amb, q, direction_net[k], eps_step);
    const double d = region.contains_unchecked(moved) ? region_distance(moved) : kInf;
    out.distances[k] = d;
    out.decreasing[k] = d < out.base_distance - 1e-12;
    if (out.decreasing[k]) ++count;
  }

  // Directions are adjacent when closer than 1.5x the coarsest nearest-
  // neighbour angle of the net.
  std::vector<std::vector<double>> angle(m, std::vector<double>(m, 0.0));
  double coarsest = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    double nearest = kInf;
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      angle[a][b] = tangent_angle(amb, direction_net[a], direction_net[b]);
      nearest = std::min(nearest, angle[a][b]);
    }
    coarsest = std::max(coarsest, nearest);
  }
  UnionFind uf(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (out.decreasing[a] && out.decreasing[b] && angle[a][b] < 1.5 * coarsest) uf.unite(a, b);
    }
  }
  std::size_t components = 0;
  for (std::size_t a = 0; a < m; ++a) {
    if (out.decreasing[a] && uf.find(a) == a) ++components;
  }
  out.proper = count < m;
  out.connected = components == 1;

  CheckReport& r = out.report;
  r.check = "condition_ii";
  r.samples = m;
  r.passed = count > 0 && out.proper && out.connected;
  r.parameters = {{"t", t}, {"eps_step", eps_step}, {"resolution", resolution},
                  {"net_size", net.size()}, {"region", region.kind_name()}};
  r.worst_case = {{"decreasing", count}, {"directions", m}, {"components", components},
                  {"proper", out.proper}, {"base_distance", std::isinf(out.base_distance)
                                                               ? nlohmann::json("unreachable")
                                                               : nlohmann::json(out.base_distance)}};
  return out;
}

std::vector<TangentCanonical> loop_probe_directions(const GrassPoint& center, const GrassPoint& base, int mixes,
                                                    std::mt19937_64& rng) {
  const PrincipalFrame pf = principal_frame(center, base);
  const int p = base.p();
  const int q = base.n() - p;
  std::vector<TangentCanonical> out;
  for (int i = 0; i < p; ++i) {
    for (int a = 0; a < q; ++a) {
      const int col[] = {i};
      const int nor[] = {a};
      const double sp[] = {1.0};
      out.push_back(make_canonical(pf.frame, pf.normals, col, nor, sp));
    }
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
          if (a == b) continue;
          for (double sign : {1.0, -1.0}) {
            const int col[] = {i, j};
            const int nor[] = {a, b};
            const double sp[] = {s, sign * s};
            out.push_back(make_canonical(pf.frame, pf.normals, col, nor, sp));
          }
        }
      }
    }
  }
  // Random rotations of the adapted frames with small integer speed ratios,
  // so that most of these directions close up.
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> ratio(1, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  const int r0 = std::min(p, q);
  for (int k = 0; k < mixes; ++k) {
    auto random_rotation = [&](int d) {
      Eigen::MatrixXd g(d, d);
      for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = gauss(rng);
      Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
      if (Q.determinant() < 0) Q.col(0) *= -1.0;
      return Q;
    };
    const Eigen::MatrixXd frame = pf.frame * random_rotation(p);
    const Eigen::MatrixXd normals = pf.normals * random_rotation(q);
    std::vector<int> ids(static_cast<std::size_t>(r0));
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<double> speeds;
    double sq = 0.0;
    for (int i = 0; i < r0; ++i) {
      const double v = ratio(rng) * (coin(rng) != 0 ? 1.0 : -1.0);
      speeds.push_back(v);
      sq += v * v;
    }
    for (double& v : speeds) v /= std::sqrt(sq);
    out.push_back(make_canonical(frame, normals, ids, ids, speeds));
  }
  return out;
}

LoopVerdict check_loop(const Region& region, const TangentCanonical& X, int k_max, double h) {
  if (region.ambient().kind != AmbientKind::kGrassmannian) throw DomainError("check_loop: needs a Grassmannian region");
  LoopVerdict out;
  const auto period = closed_geodesic_period(X, kDefaultTolerance, k_max);
  if (!period) return out;
  out.period = period->period;
  const double T = period->period;
  const int steps = std::max(200, static_cast<int>(std::ceil(T / h)));
  for (int k = 0; k <= steps; ++k) {
    const double t = T * k / steps;
    if (!region.contains_unchecked(geodesic_eval(X, t))) {
      out.exit = t;
      return out;
    }
    out.last_inside = t;
  }
  return out;
}

CheckReport no_closed_geodesic_check(const Region& slab, std::span<const GrassPoint> bases, int k_max, int mixes,
                                     std::uint64_t seed, double h) {
  const auto* hs = std::get_if<HemisphereSlab>(&slab.kind());
  if (hs == nullptr) throw DomainError("no_closed_geodesic_check: expected a hemisphere slab");
  if (k_max < 1) throw DomainError("no_closed_geodesic_check: k_max must be positive");
  std::mt19937_64 rng(seed);
  CheckReport report;
  report.check = "no_closed_geodesic";
  report.parameters = {{"epsilon", hs->epsilon}, {"k_max", k_max}, {"mixes", mixes},
                       {"seed", seed}, {"step", h}, {"bases", bases.size()}};
  std::size_t loops = 0;
  std::size_t vacuous = 0;
  std::size_t violations = 0;
  double latest_fraction = 0.0;
  nlohmann::json worst = nlohmann::json::object();
  for (std::size_t b = 0; b < bases.size(); ++b) {
    if (!slab.contains(bases[b])) throw DomainError("no_closed_geodesic_check: base sample outside the region");
    for (const TangentCanonical& X : loop_probe_directions(hs->center, bases[b], mixes, rng)) {
      ++report.samples;
      const LoopVerdict v = check_loop(slab, X, k_max, h);
      if (!v.period) {
        ++vacuous;
        continue;
      }
      ++loops;
      const double fraction = v.exit ? *v.exit / *v.period : 1.0;
      if (!v.exit) ++violations;
      if (fraction > latest_fraction || (!v.exit && violations == 1)) {
        latest_fraction = fraction;
        worst = {{"base_index", b},
                 {"lambda", X.lambda},
                 {"period", *v.period},
                 {"exit_time", v.exit ? nlohmann::json(*v.exit) : nlohmann::json("never")},
                 {"exit_fraction_of_period", fraction}};
      }
    }
  }
  report.passed = violations == 0;
  worst["closed_loops"] = loops;
  worst["no_period_found"] = vacuous;
  worst["violations"] = violations;
  report.worst_case = worst;
  return report;
}

Region build_codim2_region(const GrassPoint& w, double epsilon) {
  if (w.n() != w.p() + 2) throw DomainError("build_codim2_region: needs G+(p, p+2)");
  if (!(epsilon > 0.0) || !(epsilon < kPi / 2)) throw DomainError("build_codim2_region: epsilon must lie in (0, pi/2)");
  return Region::hemisphere_slab(w, epsilon);
}

CheckReport codim2_union_cross_check(const GrassPoint& w, double epsilon, std::size_t samples,
                                     std::uint64_t seed) {
  const Region slab = build_codim2_region(w, epsilon);
  if (w.p() < 2) throw DomainError("codim2_union_cross_check: no type-2 directions for p < 2");
  const std::vector<TangentCanonical> dirs = type_k_directions(w, 2);
  const double tx = t_crit(dirs.front());
  if (!(epsilon < tx)) throw DomainError("codim2_union_cross_check: epsilon must be below t_X");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, dirs.size() - 1);
  std::uniform_real_distribution<double> along(-tx + epsilon, tx - epsilon);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double floor = std::sin(epsilon);
  double min_margin = kInf;
  std::size_t inside = 0;
  nlohmann::json worst;
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t i = pick(rng);
    const double t = along(rng);
    const GrassPoint c = geodesic_eval(dirs[i], t);
    const TangentCanonical Y = kozlov_canonical(c, random_unit_coordinates(c.p(), c.n() - c.p(), rng));
    const double s = unit(rng) * t_crit(Y);
    const GrassPoint v = geodesic_eval(Y, s);
    const double margin = w_product(v, w) - floor;
    if (margin > 0.0) ++inside;
    if (margin < min_margin) {
      min_margin = margin;
      worst = {{"direction", i}, {"t", t}, {"ball_radius_used", s}, {"ball_t_crit", t_crit(Y)},
               {"w_product", w_product(v, w)}, {"margin", margin}};
    }
  }
  CheckReport report;
  report.check = "codim2_union_cross_check";
  report.samples = samples;
  report.passed = inside == samples;
  report.parameters = {{"epsilon", epsilon}, {"seed", seed}, {"p", w.p()}, {"n", w.n()}};
  worst["fraction_inside"] = samples == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(samples);
  report.worst_case = worst;
  return report;
}

}  // namespace grasskit
