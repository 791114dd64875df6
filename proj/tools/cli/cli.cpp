#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <grasskit/errors.hpp>
#include <grasskit/flow.hpp>
#include <grasskit/gaussmap.hpp>
#include <grasskit/grassmann.hpp>
#include <grasskit/regions.hpp>
#include <grasskit/report.hpp>

namespace grasskit::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Raised when a command's own check fails (exit code 3).
struct CheckFailed {};

std::vector<double> parse_numbers(std::span<const std::string> tokens, const std::string& what) {
  std::vector<double> out;
  for (const std::string& t : tokens) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || !std::isfinite(v)) throw DomainError(what + ": bad number '" + t + "'");
    out.push_back(v);
  }
  return out;
}

int parse_index(const std::string& t, int hi, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.size() || v < 1 || v > hi) {
    throw DomainError(what + ": index '" + t + "' must be an integer in [1, " + std::to_string(hi) + "]");
  }
  return v - 1;
}

// type1 i a | type2 i j | lambda l1 ... | matrix a11 ... a_pq (1-based
// indices, row-major matrix in the eta_{i alpha} basis).
TangentCanonical parse_direction(const GrassPoint& w, const std::vector<std::string>& spec) {
  const int p = w.p();
  const int q = w.n() - p;
  if (spec.empty()) throw DomainError("--dir: empty direction spec");
  const std::string& kind = spec.front();
  const std::vector<std::string> args(spec.begin() + 1, spec.end());
  const Eigen::MatrixXd E = w.basis();
  const Eigen::MatrixXd N = w.complement();
  if (kind == "type1") {
    if (args.size() != 2) throw DomainError("--dir type1 expects: i alpha");
    const int col[] = {parse_index(args[0], p, "type1")};
    const int nor[] = {parse_index(args[1], q, "type1")};
    const double sp[] = {1.0};
    return make_canonical(E, N, col, nor, sp);
  }
  if (kind == "type2") {
    if (args.size() != 2) throw DomainError("--dir type2 expects: i j");
    if (q < 2) throw DomainError("--dir type2 needs n - p >= 2");
    const int i = parse_index(args[0], p, "type2");
    const int j = parse_index(args[1], p, "type2");
    if (i == j) throw DomainError("--dir type2: i and j must differ");
    const int col[] = {i, j};
    const int nor[] = {0, 1};
    const double s = 1.0 / std::sqrt(2.0);
    const double sp[] = {s, s};
    return make_canonical(E, N, col, nor, sp);
  }
  if (kind == "lambda") {
    const std::vector<double> lam = parse_numbers(args, "lambda");
    if (lam.empty() || static_cast<int>(lam.size()) > std::min(p, q)) {
      throw DomainError("--dir lambda expects between 1 and min(p, n-p) speeds");
    }
    std::vector<int> ids(lam.size());
    for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = static_cast<int>(k);
    return make_canonical(E, N, ids, ids, lam);
  }
  if (kind == "matrix") {
    const std::vector<double> a = parse_numbers(args, "matrix");
    if (static_cast<int>(a.size()) != p * q) throw DomainError("--dir matrix expects p*(n-p) entries");
    Eigen::MatrixXd A(p, q);
    for (int i = 0; i < p; ++i) {
      for (int k = 0; k < q; ++k) A(i, k) = a[static_cast<std::size_t>(i * q + k)];
    }
    return kozlov_canonical(w, A);
  }
  throw DomainError("--dir: unknown kind '" + kind + "' (type1, type2, lambda, matrix)");
}

GrassPoint parse_frame(const std::vector<std::string>& tokens, int p, int n, const std::string& what) {
  const std::vector<double> v = parse_numbers(tokens, what);
  if (static_cast<int>(v.size()) != n * p) throw DomainError(what + ": expected n*p numbers, column by column");
  const Eigen::Map<const Eigen::MatrixXd> M(v.data(), n, p);
  return GrassPoint(OrientedFrame::orthonormalize(M));
}

nlohmann::json canonical_json(const TangentCanonical& X) {
  nlohmann::json frame = nlohmann::json::array();
  for (Eigen::Index c = 0; c < X.frame.cols(); ++c) {
    frame.push_back(std::vector<double>(X.frame.col(c).data(), X.frame.col(c).data() + X.frame.rows()));
  }
  nlohmann::json normals = nlohmann::json::array();
  for (Eigen::Index c = 0; c < X.normals.cols(); ++c) {
    normals.push_back(std::vector<double>(X.normals.col(c).data(), X.normals.col(c).data() + X.normals.rows()));
  }
  nlohmann::json out = {{"r", X.r()}, {"lambda", X.lambda}, {"speed", X.speed()},
                        {"frame", frame}, {"normals", normals}};
  if (X.r() > 0) {
    out["t_crit_unit"] = t_crit(X.normalized());
    const auto period = closed_geodesic_period(X);
    out["period"] = period ? nlohmann::json(period->period) : nlohmann::json(nullptr);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw DomainError("failed writing '" + path + "'");
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text(path, text);
  }
}

// ---- flow config -------------------------------------------------------------------

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read config '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
      throw DomainError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

class Config {
 public:
  explicit Config(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  std::string str(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }
  double num(const std::string& key, double fallback) {
    const std::string s = str(key, "");
    if (s.empty()) return fallback;
    return parse_numbers(std::vector<std::string>{s}, key).front();
  }
  long integer(const std::string& key, long fallback) {
    const double v = num(key, static_cast<double>(fallback));
    if (v != std::floor(v)) throw DomainError("config key '" + key + "' must be an integer");
    return static_cast<long>(v);
  }
  void reject_unknown() const {
    for (const auto& [k, v] : kv_) {
      if (!used_.count(k)) throw DomainError("unknown config key '" + k + "'");
    }
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

int cmd_flow(const std::string& config_path, const std::string& prefix, std::ostream& out) {
  Config cfg(read_config(config_path));
  const std::string target_name = cfg.str("target", "s2");
  const std::string region_name = cfg.str("region", "none");
  const std::string initial = cfg.str("initial", "cap");
  const int m = static_cast<int>(cfg.integer("m", 32));
  const double epsilon = cfg.num("epsilon", 0.2);
  const double polar_lo = cfg.num("polar_lo", 0.5);
  const double polar_hi = cfg.num("polar_hi", 1.2);
  const auto seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
  const int p = static_cast<int>(cfg.integer("p", 2));
  const int n = static_cast<int>(cfg.integer("n", 4));
  ExperimentBudget budget;
  budget.max_steps = cfg.integer("budget", budget.max_steps);
  budget.monitor_every = cfg.integer("monitor_every", budget.monitor_every);
  budget.tau = cfg.num("tau", 0.0);
  cfg.reject_unknown();

  std::shared_ptr<const EmbeddedTarget> target;
  if (target_name == "s2") {
    target = sphere_target(2);
  } else if (target_name == "s2xs2") {
    target = sphere_product_target(2, 2);
  } else if (target_name == "grassmann") {
    target = grassmann_target(p, n);
  } else {
    throw DomainError("config target must be s2, s2xs2 or grassmann");
  }

  std::optional<Region> region;
  if (region_name == "half-equator") {
    region = Region::sphere_minus_half_equator(epsilon);
  } else if (region_name == "product-half-equator") {
    const Region f = Region::sphere_minus_half_equator(epsilon);
    region = Region::product(f, f);
  } else if (region_name == "slab") {
    region = build_codim2_region(GrassPoint::standard(p, n), epsilon);
  } else if (region_name != "none") {
    throw DomainError("config region must be none, half-equator, product-half-equator or slab");
  }

  const DomainMesh mesh = build_torus_mesh(m);
  Eigen::MatrixXd values;
  if (initial == "cap") {
    values = cap_winding_map(m, polar_lo, polar_hi);
  } else if (initial == "product-cap") {
    values = product_cap_map(m, polar_lo, polar_hi);
  } else if (initial == "equator") {
    values = equator_wrap_map(m);
  } else if (initial == "constant") {
    Eigen::VectorXd v = target->project(Eigen::VectorXd::Ones(target->ambient_dim()));
    if (target_name == "grassmann") {
      const Eigen::MatrixXd E = GrassPoint::standard(p, n).basis();
      v = Eigen::Map<const Eigen::VectorXd>(E.data(), E.size());
    } else if (target_name == "s2") {
      v = Eigen::Vector3d::UnitZ();
    }
    values = constant_map(m, v);
  } else if (initial == "random") {
    values = random_map(m, *target, seed);
  } else if (initial == "slab-ball") {
    if (target_name != "grassmann") throw DomainError("initial slab-ball needs the grassmann target");
    // Small smooth perturbation of the standard frame.
    const GrassPoint w = GrassPoint::standard(p, n);
    values.resize(target->ambient_dim(), m * m);
    for (int s = 0; s < m; ++s) {
      for (int t = 0; t < m; ++t) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, n - p);
        A(0, 0) = 0.3 * std::sin(2 * kPi * s / m);
        A(p - 1, n - p - 1) = 0.3 * std::cos(2 * kPi * t / m);
        const Eigen::MatrixXd E = geodesic_frame(kozlov_canonical(w, A), 1.0);
        values.col(s * m + t) = Eigen::Map<const Eigen::VectorXd>(E.data(), E.size());
      }
    }
  } else {
    throw DomainError("config initial must be cap, product-cap, equator, constant, random or slab-ball");
  }

  const ExperimentReport report =
      run_experiment(mesh, *target, values, region ? &*region : nullptr, budget);
  nlohmann::json summary = report.summary();
  summary["config"] = {{"target", target_name}, {"region", region_name}, {"initial", initial}, {"m", m},
                       {"epsilon", epsilon}, {"seed", seed}, {"budget", budget.max_steps}};
  if (!prefix.empty()) {
    write_text(prefix + ".csv", report.trace_csv());
    write_text(prefix + ".json", dump_json(summary));
  }
  out << dump_json(summary);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerics for oriented Grassmannians, barrier regions and harmonic map flow"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  int p = 2;
  int n = 4;
  std::string out_path;

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "Tabulate a geodesic through the standard plane");
  std::vector<std::string> dir;
  double tmax = kPi;
  int steps = 100;
  geo->add_option("--p", p, "plane dimension")->required();
  geo->add_option("--n", n, "ambient dimension")->required();
  geo->add_option("--dir", dir, "type1 i a | type2 i j | lambda l1 .. | matrix a11 .. apq")->required()->expected(1, -1);
  geo->add_option("--tmax", tmax, "final time");
  geo->add_option("--steps", steps, "number of intervals");
  geo->add_option("--out", out_path, "CSV output path (default stdout)");

  // dist
  auto* dst = app.add_subcommand("dist", "Distance, w-product and principal angles of two planes");
  std::vector<std::string> frame_a;
  std::vector<std::string> frame_b;
  dst->add_option("--p", p)->required();
  dst->add_option("--n", n)->required();
  dst->add_option("--frame-a", frame_a, "n*p numbers, column by column")->required()->expected(1, -1);
  dst->add_option("--frame-b", frame_b, "n*p numbers, column by column")->required()->expected(1, -1);
  dst->add_option("--out", out_path);

  // canonical
  auto* can = app.add_subcommand("canonical", "Canonical form of a tangent vector at the standard plane");
  std::vector<std::string> matrix;
  can->add_option("--p", p)->required();
  can->add_option("--n", n)->required();
  can->add_option("--matrix", matrix, "p*(n-p) coefficients in the eta basis, row by row")
      ->required()->expected(1, -1);
  can->add_option("--out", out_path);

  // region-check
  auto* reg = app.add_subcommand("region-check", "Run a region verifier");
  std::string check;
  double epsilon = 0.6;
  int samples = 100;
  std::uint64_t seed = 1;
  int k_max = 8;
  double K = kPi;
  double t0 = 0.5;
  double resolution = 0.02;
  reg->add_option("--check", check, "condition-i | no-closed | union | disconnection")
      ->required()
      ->check(CLI::IsMember({"condition-i", "no-closed", "union", "disconnection"}));
  reg->add_option("--p", p);
  reg->add_option("--n", n);
  reg->add_option("--epsilon", epsilon);
  reg->add_option("--samples", samples);
  reg->add_option("--seed", seed);
  reg->add_option("--k-max", k_max);
  reg->add_option("--K", K);
  reg->add_option("--t0", t0, "curve parameter for disconnection");
  reg->add_option("--resolution", resolution, "net resolution for disconnection");
  reg->add_option("--out", out_path);

  // flow
  auto* flw = app.add_subcommand("flow", "Run a harmonic map heat flow experiment");
  std::string config;
  std::string prefix;
  flw->add_option("--config", config, "key=value config file")->required();
  flw->add_option("--out", prefix, "output prefix for .csv and .json");

  // slope-scan
  auto* slp = app.add_subcommand("slope-scan", "Slope scan and Bernstein verdict for a codimension-2 graph");
  std::string sampler;
  std::string grid;
  double beta0 = 2.0;
  std::optional<double> eps_opt;
  double half_width = 10.0;
  int points = 9;
  auto* sampler_opt = slp->add_option("--sampler", sampler, "affine | sincos | quadratic | perturbed");
  auto* grid_opt = slp->add_option("--grid", grid, "Jacobian grid file");
  sampler_opt->excludes(grid_opt);
  slp->add_option("--beta0", beta0);
  slp->add_option("--epsilon", eps_opt);
  slp->add_option("--half-width", half_width);
  slp->add_option("--points", points, "grid points per axis");
  slp->add_option("--out", out_path);

  // verify
  auto* ver = app.add_subcommand("verify", "Run a built-in check suite");
  std::string suite = "all";
  ver->add_option("--suite", suite)->check(CLI::IsMember({"algebra", "grassmann", "regions", "flow", "gauss", "all"}));
  ver->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (geo->parsed()) {
      const GrassPoint w = GrassPoint::standard(p, n);
      if (steps < 1) throw DomainError("--steps must be positive");
      const TangentCanonical X = parse_direction(w, dir);
      std::ostringstream os;
      os << "t,w_product,dist,in_BG\n";
      for (int k = 0; k <= steps; ++k) {
        const double t = tmax * k / steps;
        const GrassPoint v = geodesic_eval(X, t);
        os << format_double(t) << ',' << format_double(w_product(v, w)) << ',' << format_double(dist(w, v)) << ','
           << (in_BG(w, v, true) ? 1 : 0) << '\n';
      }
      emit(out, out_path, os.str());
      return kExitOk;
    }
    if (dst->parsed()) {
      const GrassPoint a = parse_frame(frame_a, p, n, "--frame-a");
      const GrassPoint b = parse_frame(frame_b, p, n, "--frame-b");
      const nlohmann::json doc = {{"dist", dist(a, b)},
                                  {"w_product", w_product(a, b)},
                                  {"principal_angles", oriented_principal_angles(a, b)},
                                  {"in_BG", in_BG(a, b, true)}};
      emit(out, out_path, dump_json(doc));
      return kExitOk;
    }
    if (can->parsed()) {
      const GrassPoint w = GrassPoint::standard(p, n);
      std::vector<std::string> spec{"matrix"};
      spec.insert(spec.end(), matrix.begin(), matrix.end());
      emit(out, out_path, dump_json(canonical_json(parse_direction(w, spec))));
      return kExitOk;
    }
    if (reg->parsed()) {
      if (samples < 1) throw DomainError("--samples must be positive");
      CheckReport report;
      if (check == "disconnection") {
        const Region tube = half_equator_tube(epsilon);
        const auto& t = std::get<TubeAlongCurve>(tube.kind());
        std::size_t idx = 0;
        for (std::size_t j = 0; j < t.params.size(); ++j) {
          if (std::abs(t.params[j] - t0) < std::abs(t.params[idx] - t0)) idx = j;
        }
        const std::vector<Point> net = sphere_net(resolution);
        report = slab_disconnection_check(tube, idx, net, resolution);
      } else if (check == "union") {
        report = codim2_union_cross_check(GrassPoint::standard(p, n), epsilon, static_cast<std::size_t>(samples), seed);
      } else {
        const Region slab = build_codim2_region(GrassPoint::standard(p, n), epsilon);
        std::mt19937_64 rng(seed);
        const std::vector<Point> pts = sample_region(slab, static_cast<std::size_t>(samples), rng);
        if (check == "no-closed") {
          std::vector<GrassPoint> bases;
          for (const Point& x : pts) bases.push_back(std::get<GrassPoint>(x));
          report = no_closed_geodesic_check(slab, bases, k_max, 8, seed);
        } else {
          std::vector<ExitSample> s;
          for (const Point& x : pts) s.push_back({x, random_unit_tangent(slab.ambient(), x, rng)});
          report = condition_i_check(slab, s, K);
        }
      }
      emit(out, out_path, dump_json(report.to_json()));
      return report.passed ? kExitOk : kExitCheckFailed;
    }
    if (flw->parsed()) return cmd_flow(config, prefix, out);
    if (slp->parsed()) {
      std::vector<GraphJacobianSample> data;
      if (!grid.empty()) {
        std::ifstream f(grid);
        if (!f) throw DomainError("cannot read grid '" + grid + "'");
        data = read_jacobian_grid(f);
      } else {
        const GraphSampler f = builtin_sampler(sampler.empty() ? "affine" : sampler);
        if (f.q != 2) throw DomainError("slope-scan needs codimension 2 data");
        data = scan_grid(f, half_width, points);
      }
      const CheckReport verdict = bernstein_verdict(data, beta0, eps_opt);
      nlohmann::json doc = verdict.to_json();
      doc["hemisphere"] = hemisphere_report(data, beta0).to_json();
      emit(out, out_path, dump_json(doc));
      return verdict.passed ? kExitOk : kExitCheckFailed;
    }
    if (ver->parsed()) {
      const nlohmann::json doc = verify_suite(suite);
      emit(out, out_path, dump_json(doc));
      return doc.at("passed").get<bool>() ? kExitOk : kExitCheckFailed;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace grasskit::cli
