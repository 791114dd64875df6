#include "cli/cli.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <grasskit/flow.hpp>
#include <grasskit/gaussmap.hpp>
#include <grasskit/grassmann.hpp>
#include <grasskit/multivec.hpp>
#include <grasskit/regions.hpp>
#include <grasskit/report.hpp>

namespace grasskit::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Suite {
  nlohmann::json checks = nlohmann::json::array();

  void add(const std::string& name, bool passed, nlohmann::json detail) {
    checks.push_back({{"name", name}, {"passed", passed}, {"detail", std::move(detail)}});
  }
};

MultiVector random_multivector(int n, int p, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MultiVector v(n, p);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = g(rng);
  return v;
}

// ---- algebra ---------------------------------------------------------------------

void algebra(Suite& s) {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const int q = 1 + static_cast<int>(rng() % static_cast<unsigned>(p));
    const MultiVector omega = random_multivector(n, p, rng);
    const MultiVector xi = random_multivector(n, q, rng);
    const MultiVector phi = random_multivector(n, p - q, rng);
    const double lhs = scalar_product(inner_mult(omega, xi), phi);
    const double rhs = scalar_product(omega, wedge(xi, phi));
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  s.add("adjoint identity fuzz (2000 triples, n <= 6)", worst < 1e-10, {{"max_error", worst}});

  worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 3);
    const MultiVector a = random_multivector(n, 1, rng);
    const MultiVector b = random_multivector(n, 2, rng);
    const MultiVector c = random_multivector(n, 1, rng);
    worst = std::max(worst, (wedge(a, c) + wedge(c, a)).norm());
    worst = std::max(worst, (wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).norm());
  }
  s.add("wedge associative and anticommuting on vectors", worst < 1e-12, {{"max_error", worst}});

  bool simple_ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd M(6, 3);
    for (Eigen::Index k = 0; k < M.size(); ++k) M.data()[k] = g(rng);
    simple_ok = simple_ok && is_simple(wedge_columns(M)) && std::abs(plucker(M).norm() - 1.0) < 1e-12;
  }
  const MultiVector nonsimple = MultiVector::basis(4, {0, 1}) + MultiVector::basis(4, {2, 3});
  simple_ok = simple_ok && !is_simple(nonsimple);
  s.add("simplicity of wedges, e12 + e34 not simple", simple_ok, {{"trials", 200}});
}

// ---- grassmann -------------------------------------------------------------------

TangentCanonical equal_speed(int p, int n, int r) {
  const GrassPoint w = GrassPoint::standard(p, n);
  std::vector<int> ids(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) ids[static_cast<std::size_t>(k)] = k;
  const std::vector<double> speeds(static_cast<std::size_t>(r), 1.0 / std::sqrt(static_cast<double>(r)));
  return make_canonical(w.basis(), w.complement(), ids, ids, speeds);
}

void grassmann(Suite& s) {
  s.add("diameter(2,4) = pi", std::abs(diameter(2, 4) - kPi) < 1e-15, {{"value", diameter(2, 4)}});

  double worst = 0.0;
  for (const auto& [p, n, r] : {std::tuple{2, 4, 2}, std::tuple{3, 6, 2}, std::tuple{3, 6, 3}}) {
    const TangentCanonical X = equal_speed(p, n, r);
    const GrassPoint w = GrassPoint::standard(p, n);
    for (int k = 0; k <= 400; ++k) {
      const double t = 4.0 * kPi * k / 400;
      const double expect = std::pow(std::cos(t / std::sqrt(static_cast<double>(r))), r);
      worst = std::max(worst, std::abs(scalar_product(geodesic_eval(X, t).plucker(), w.plucker()) - expect));
    }
  }
  s.add("cos^r law along equal-speed geodesics", worst < 1e-10, {{"max_error", worst}});

  worst = 0.0;
  const std::pair<TangentCanonical, double> periods[] = {
      {equal_speed(2, 4, 1), 2 * kPi}, {equal_speed(2, 4, 2), std::sqrt(2.0) * kPi},
      {equal_speed(3, 6, 3), 2 * std::sqrt(3.0) * kPi}};
  bool found = true;
  for (const auto& [X, expect] : periods) {
    const auto T = closed_geodesic_period(X);
    if (!T) {
      found = false;
      continue;
    }
    worst = std::max(worst, std::abs(T->period - expect));
    worst = std::max(worst, dist(geodesic_eval(X, T->period), X.base()));
  }
  s.add("closed geodesic periods 2pi, sqrt2 pi, 2 sqrt3 pi", found && worst < 1e-9, {{"max_error", worst}});

  const double tc[] = {t_crit(equal_speed(2, 4, 1)), t_crit(equal_speed(2, 4, 2)), t_crit(equal_speed(3, 6, 3))};
  const double tc_expect[] = {kPi / 2, std::sqrt(2.0) * kPi / 4, std::sqrt(3.0) * kPi / 4};
  worst = 0.0;
  for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(tc[k] - tc_expect[k]));
  s.add("critical times", worst < 1e-15, {{"values", tc}});

  std::mt19937_64 rng(11);
  worst = 0.0;
  int pairs = 0;
  for (const auto& [p, n] : {std::pair{2, 4}, std::pair{3, 6}}) {
    while (pairs < (p == 2 ? 150 : 300)) {
      const GrassPoint a = random_grass_point(p, n, rng);
      const GrassPoint b = random_grass_point(p, n, rng);
      if (oriented_principal_angles(a, b).front() >= kPi - 0.1) continue;
      const TangentCanonical L = log_map(a, b);
      worst = std::max(worst, dist(geodesic_eval(L, 1.0), b));
      ++pairs;
    }
  }
  s.add("exp/log round trip (300 pairs)", worst < 1e-7, {{"max_error", worst}});

  worst = 0.0;
  for (int k = 0; k < 300; ++k) {
    const GrassPoint a = random_grass_point(3, 6, rng);
    const GrassPoint b = random_grass_point(3, 6, rng);
    worst = std::max(worst, std::abs(w_product(a, b) - w_product_plucker(a, b)));
  }
  s.add("w_product agrees with the Pluecker inner product", worst < 1e-12, {{"max_error", worst}});
}

// ---- regions ---------------------------------------------------------------------

void regions(Suite& s) {
  const Region tube = half_equator_tube(0.2);
  const CheckReport disc = slab_disconnection_check(tube, 100, sphere_net(0.05), 0.05);
  s.add("half-equator tube splits at t0 = 1/2", disc.passed, disc.to_json());

  const KappaReport k = kappa(tube, tube_center(tube, 140));
  s.add("kappa negative at a point on the curve", k.inside, {{"entry", k.entry.has_value()}});

  for (const auto& [p, n] : {std::pair{2, 4}, std::pair{4, 6}}) {
    const Region slab = build_codim2_region(GrassPoint::standard(p, n), 0.6);
    std::mt19937_64 rng(42);
    const std::vector<Point> pts = sample_region(slab, 100, rng);
    std::vector<GrassPoint> bases;
    std::vector<ExitSample> exits;
    for (const Point& x : pts) {
      bases.push_back(std::get<GrassPoint>(x));
      exits.push_back({x, random_unit_tangent(slab.ambient(), x, rng)});
    }
    const std::string tag = "G+(" + std::to_string(p) + "," + std::to_string(n) + ") slab, epsilon 0.6";
    const CheckReport loops = no_closed_geodesic_check(slab, bases, 8, 8, 42);
    s.add(tag + ": no closed geodesic", loops.passed, loops.to_json());
    const CheckReport ci = condition_i_check(slab, exits, kPi);
    s.add(tag + ": geodesics exit before pi", ci.passed, ci.to_json());
  }
}

// ---- flow ------------------------------------------------------------------------

void flow(Suite& s) {
  const auto s2 = sphere_target(2);
  const Region region = Region::sphere_minus_half_equator(0.2);

  const DomainMesh small = build_torus_mesh(8);
  ExperimentBudget budget;
  budget.max_steps = 10;
  const ExperimentReport constant =
      run_experiment(small, *s2, constant_map(8, Eigen::Vector3d::UnitZ()), &region, budget);
  s.add("constant initial map is collapsed at step 0",
        constant.classification == Classification::kCollapsed && constant.steps == 0,
        {{"steps", constant.steps}});

  const DomainMesh mesh = build_torus_mesh(16);
  budget.max_steps = 50000;
  budget.monitor_every = 100;
  const ExperimentReport cap = run_experiment(mesh, *s2, cap_winding_map(16, 0.5, 1.2), &region, budget);
  s.add("cap winding map collapses inside the region",
        cap.classification == Classification::kCollapsed && !cap.first_region_exit && cap.energy_monotone,
        {{"steps", cap.steps}, {"classification", to_string(cap.classification)}});

  const DomainMesh wide = build_torus_mesh(32);
  budget.max_steps = 2000;
  budget.monitor_every = 1000;
  const ExperimentReport wrap = run_experiment(wide, *s2, equator_wrap_map(32), nullptr, budget);
  const double diam = image_diameter(wrap.final_state.values);
  s.add("equator wrap stays nonconstant and near-harmonic",
        wrap.classification == Classification::kNearHarmonic && diam > 1.0 && wrap.final_state.tension_norm < 1e-2,
        {{"diameter", diam}, {"tension_norm", wrap.final_state.tension_norm}});
}

// ---- gauss -----------------------------------------------------------------------

void gauss(Suite& s) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int p = 1 + static_cast<int>(rng() % 4);
    const int q = 1 + static_cast<int>(rng() % 4);
    GraphJacobianSample sample{Eigen::VectorXd::Zero(p), Eigen::MatrixXd(p, q)};
    for (Eigen::Index k = 0; k < sample.J.size(); ++k) sample.J.data()[k] = g(rng);
    worst = std::max(worst, reciprocal_check(sample));
  }
  s.add("w_product times slope equals one (2000 Jacobians)", worst < 1e-10, {{"max_error", worst}});

  const auto verdict = [](const std::string& name, double beta0) {
    return bernstein_verdict(scan_grid(builtin_sampler(name), 10.0, 9), beta0);
  };
  const CheckReport affine = verdict("affine", 2.0);
  s.add("affine graph: positive verdict", affine.passed, affine.worst_case);
  const CheckReport sincos = verdict("sincos", 2.0);
  const double min_w = sincos.worst_case.value("min_w_product", 0.0);
  s.add("sin/cos graph with beta0 = 2: positive, min w_product >= 1/2", sincos.passed && min_w >= 0.5,
        sincos.worst_case);
  const CheckReport quad = verdict("quadratic", 2.0);
  s.add("|x|^2 graph: negative verdict", !quad.passed, quad.worst_case);
}

}  // namespace

nlohmann::json verify_suite(const std::string& suite) {
  static const std::vector<std::pair<std::string, void (*)(Suite&)>> kSuites = {
      {"algebra", algebra}, {"grassmann", grassmann}, {"regions", regions}, {"flow", flow}, {"gauss", gauss}};
  Suite s;
  bool known = suite == "all";
  for (const auto& [name, fn] : kSuites) {
    if (suite == "all" || suite == name) {
      known = true;
      Suite part;
      fn(part);
      for (auto& c : part.checks) {
        c["name"] = name + ": " + c["name"].get<std::string>();
        s.checks.push_back(std::move(c));
      }
    }
  }
  if (!known) throw std::invalid_argument("unknown suite '" + suite + "'");
  bool passed = true;
  for (const auto& c : s.checks) passed = passed && c.at("passed").get<bool>();
  return {{"suite", suite}, {"passed", passed}, {"checks", s.checks}};
}

}  // namespace grasskit::cli
