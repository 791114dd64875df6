// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <grasskit/flow.hpp>
#include <grasskit/gaussmap.hpp>
#include <grasskit/grassmann.hpp>
#include <grasskit/multivec.hpp>
#include <grasskit/regions.hpp>
#include <grasskit/report.hpp>

using namespace grasskit;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

TangentCanonical equal_speeds(int p, int n, int r) {
  const GrassPoint w = GrassPoint::standard(p, n);
  std::vector<int> ids;
  for (int k = 0; k < r; ++k) ids.push_back(k);
  const std::vector<double> lam(static_cast<std::size_t>(r), 1.0 / std::sqrt(double(r)));
  return make_canonical(w.basis(), w.complement(), ids, ids, lam);
}

// max over 1000 samples of |<psi(w_X(t)), psi(w)> - cos^r(t / sqrt r)|
double cos_law_error(int p, int n, int r) {
  const TangentCanonical X = equal_speeds(p, n, r);
  const MultiVector base = X.base().plucker();
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double t = 4.0 * kPi * k / 999;
    const double expect = std::pow(std::cos(t / std::sqrt(double(r))), r);
    worst = std::max(worst, std::abs(scalar_product(geodesic_eval(X, t).plucker(), base) - expect));
  }
  return worst;
}

Outcome geodesic_law() {
  const auto start = std::chrono::steady_clock::now();
  const double e1 = cos_law_error(2, 4, 2);
  const double e2 = cos_law_error(3, 6, 2);
  const double secs = seconds_since(start);
  return {std::max(e1, e2) < 1e-10 && secs < 1.0,
          "max error G(2,4) " + num(e1) + ", G(3,6) " + num(e2) + ", " + num(secs) + " s"};
}

Outcome cos_power_law() {
  const double e = cos_law_error(3, 6, 3);
  return {e < 1e-10, "max error r0 = 3 in G(3,6) " + num(e)};
}

Outcome periods() {
  const std::array<std::pair<TangentCanonical, double>, 3> cases = {
      std::pair{equal_speeds(2, 4, 1), 2 * kPi}, std::pair{equal_speeds(2, 4, 2), std::sqrt(2.0) * kPi},
      std::pair{equal_speeds(3, 6, 3), 2 * std::sqrt(3.0) * kPi}};
  double period_err = 0.0;
  double return_err = 0.0;
  for (const auto& [X, expect] : cases) {
    const auto T = closed_geodesic_period(X);
    if (!T) return {false, "no period found"};
    period_err = std::max(period_err, std::abs(T->period - expect));
    return_err = std::max(return_err, dist(geodesic_eval(X, T->period), X.base()));
  }
  return {period_err < 1e-9 && return_err < 1e-9,
          "period error " + num(period_err) + ", return distance " + num(return_err)};
}

Outcome critical_times() {
  const std::array<std::pair<TangentCanonical, double>, 3> cases = {
      std::pair{equal_speeds(2, 4, 1), kPi / 2}, std::pair{equal_speeds(2, 4, 2), std::sqrt(2.0) * kPi / 4},
      std::pair{equal_speeds(3, 6, 3), std::sqrt(3.0) * kPi / 4}};
  double closed_err = 0.0;
  double grid_err = 0.0;
  for (const auto& [X, expect] : cases) {
    const double tc = t_crit(X);
    closed_err = std::max(closed_err, std::abs(tc - expect));
    // First grid time (step 1e-4) whose point leaves the closed B_G.
    double first_out = -1.0;
    for (int k = 0; k < 40000; ++k) {
      const double t = 1e-4 * k;
      if (!in_BG(X.base(), geodesic_eval(X, t), true)) {
        first_out = t;
        break;
      }
    }
    grid_err = std::max(grid_err, first_out < 0 ? kPi : std::abs(first_out - tc));
  }
  return {closed_err <= 4e-16 && grid_err <= 1e-4,
          "closed-form error " + num(closed_err) + ", B_G transition offset " + num(grid_err)};
}

Outcome diameter_check() {
  std::mt19937_64 rng(5);
  double hi = 0.0;
  for (int k = 0; k < 10000; ++k) {
    hi = std::max(hi, dist(random_grass_point(2, 4, rng), random_grass_point(2, 4, rng)));
  }
  for (int k = 0; k < 20; ++k) {
    const GrassPoint w = random_grass_point(2, 4, rng);
    hi = std::max(hi, dist(w, w.reversed()));
  }
  const double d = diameter(2, 4);
  return {d == kPi && hi <= kPi + 1e-9 && hi >= kPi - 0.05,
          "diameter(2,4) = " + num(d) + ", empirical max " + std::to_string(hi)};
}

Outcome slope_reciprocal() {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const int p = 1 + static_cast<int>(rng() % 4);
    const int q = 1 + static_cast<int>(rng() % 4);
    GraphJacobianSample s{Eigen::VectorXd::Zero(p), Eigen::MatrixXd(p, q)};
    for (Eigen::Index i = 0; i < s.J.size(); ++i) s.J.data()[i] = g(rng);
    worst = std::max(worst, reciprocal_check(s));
  }
  return {worst < 1e-10, "max |w * slope - 1| " + num(worst)};
}

MultiVector random_mv(int n, int p, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MultiVector v(n, p);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = g(rng);
  return v;
}

Outcome adjoint_identity() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const int q = 1 + static_cast<int>(rng() % static_cast<unsigned>(p));
    const MultiVector omega = random_mv(n, p, rng);
    const MultiVector xi = random_mv(n, q, rng);
    const MultiVector phi = random_mv(n, p - q, rng);
    worst = std::max(worst, std::abs(scalar_product(inner_mult(omega, xi), phi) - scalar_product(omega, wedge(xi, phi))));
  }
  return {worst < 1e-10, "max discrepancy " + num(worst)};
}

Outcome exp_log() {
  std::mt19937_64 rng(8);
  double worst = 0.0;
  for (const auto& [p, n] : {std::pair{2, 4}, std::pair{3, 6}}) {
    int done = 0;
    while (done < 1000) {
      const GrassPoint a = random_grass_point(p, n, rng);
      const GrassPoint b = random_grass_point(p, n, rng);
      if (oriented_principal_angles(a, b)[0] >= kPi - 0.1) continue;
      worst = std::max(worst, dist(geodesic_eval(log_map(a, b), 1.0), b));
      ++done;
    }
  }
  return {worst < 1e-7, "max dist(exp(log), target) " + num(worst)};
}

Outcome star_probe() {
  const int m = 32;
  const Region region = Region::sphere_minus_half_equator(0.2);
  ExperimentBudget budget;
  budget.max_steps = 200000;
  const ExperimentReport cap =
      run_experiment(build_torus_mesh(m), *sphere_target(2), cap_winding_map(m, 0.5, 1.2), &region, budget);
  const bool collapsed = cap.classification == Classification::kCollapsed && cap.trace.back().diameter < 1e-3 &&
                         !cap.first_region_exit;

  ExperimentBudget wrap_budget;
  wrap_budget.max_steps = 20000;
  wrap_budget.monitor_every = 1000;
  const ExperimentReport wrap =
      run_experiment(build_torus_mesh(64), *sphere_target(2), equator_wrap_map(64), nullptr, wrap_budget);
  const double diam = wrap.trace.back().diameter;
  const double tens = wrap.final_state.tension_norm;
  return {collapsed && diam > 1.0 && tens < 1e-2,
          "cap map collapsed in " + std::to_string(cap.steps) + " steps; equator wrap diameter " + num(diam) +
              ", tension " + num(tens) + " (evidence, not a proof)"};
}

CheckReport slab_loops(int p, int n, double eps, std::vector<ExitSample>* exits) {
  const Region slab = build_codim2_region(GrassPoint::standard(p, n), eps);
  std::mt19937_64 rng(42);
  const std::vector<Point> pts = sample_region(slab, 100, rng);
  std::vector<GrassPoint> bases;
  for (const Point& x : pts) {
    bases.push_back(std::get<GrassPoint>(x));
    if (exits != nullptr) exits->push_back({x, random_unit_tangent(slab.ambient(), x, rng)});
  }
  return no_closed_geodesic_check(slab, bases, 8, 8, 42);
}

Outcome region_coherence() {
  const auto start = std::chrono::steady_clock::now();
  constexpr double eps = 0.6;
  bool ok = true;
  std::string detail = "epsilon " + num(eps) + ":";
  for (const auto& [p, n] : {std::pair{2, 4}, std::pair{4, 6}}) {
    std::vector<ExitSample> exits;
    const CheckReport loops = slab_loops(p, n, eps, &exits);
    const Region slab = build_codim2_region(GrassPoint::standard(p, n), eps);
    const CheckReport ci = condition_i_check(slab, exits, kPi);
    ok = ok && loops.passed && ci.passed && loops.parameters["bases"] == 100;
    detail += " G(" + std::to_string(p) + "," + std::to_string(n) + ") loops " +
              loops.worst_case["closed_loops"].dump() + " all exit, max exit time " +
              ci.worst_case["max_exit_time"].dump().substr(0, 6) + ";";
  }
  const CheckReport small = slab_loops(2, 4, 0.25, nullptr);
  const double secs = seconds_since(start);
  detail += " at epsilon 0.25 " + small.worst_case["violations"].dump() + " closed loops stay inside; " +
            num(secs) + " s";
  return {ok && secs < 60.0, detail};
}

Outcome determinism() {
  const auto start = std::chrono::steady_clock::now();
  auto run_once = [](std::string& out) {
    const std::string cmd = std::string("\"") + GRASSKIT_CLI_PATH + "\" verify --suite all";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return -1;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    return pclose(pipe);
  };
  std::string a;
  std::string b;
  const int ca = run_once(a);
  const int cb = run_once(b);
  const double secs = seconds_since(start);
  return {ca == 0 && cb == 0 && !a.empty() && a == b && secs < 300.0,
          std::to_string(a.size()) + " bytes, identical " + (a == b ? "yes" : "no") + ", exit " + std::to_string(ca) +
              "/" + std::to_string(cb) + ", " + num(secs) + " s for two runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"geodesic law cos^2(t/sqrt2)", geodesic_law},
      {"cos-power law r0 = 3", cos_power_law},
      {"closed geodesic periods", periods},
      {"critical times", critical_times},
      {"diameter of G+(2,4)", diameter_check},
      {"slope reciprocal", slope_reciprocal},
      {"adjoint identity fuzz", adjoint_identity},
      {"exp/log round trip", exp_log},
      {"harmonic map probe on S^2", star_probe},
      {"codim-2 region coherence", region_coherence},
      {"verify determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s %2zu  %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
