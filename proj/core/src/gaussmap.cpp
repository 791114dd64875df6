#include "grasskit/gaussmap.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "grasskit/errors.hpp"
#include "grasskit/regions.hpp"

namespace grasskit {

namespace {

void require_sample(const GraphJacobianSample& s) {
  if (s.J.rows() < 1 || s.J.cols() < 1) throw DomainError("jacobian sample must be at least 1 x 1");
  if (s.x.size() != s.J.rows()) throw DomainError("jacobian sample: x has the wrong dimension");
  if (!s.J.allFinite() || !s.x.allFinite()) throw DomainError("jacobian sample has non-finite entries");
}

void require_uniform_shape(std::span<const GraphJacobianSample> samples) {
  if (samples.empty()) throw DomainError("no jacobian samples");
  for (const auto& s : samples) {
    require_sample(s);
    if (s.J.rows() != samples.front().J.rows() || s.J.cols() != samples.front().J.cols()) {
      throw DomainError("jacobian samples have mixed shapes");
    }
  }
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

GrassPoint gauss_point(const GraphJacobianSample& s) {
  require_sample(s);
  const Eigen::Index p = s.J.rows();
  const Eigen::Index q = s.J.cols();
  Eigen::MatrixXd cols(p + q, p);
  cols.topRows(p).setIdentity();
  cols.bottomRows(q) = s.J.transpose();
  return GrassPoint(OrientedFrame::orthonormalize(cols));
}

GrassPoint base_plane(int p, int q) { return GrassPoint::standard(p, p + q); }

double slope(const Eigen::MatrixXd& J) {
  const Eigen::MatrixXd g = Eigen::MatrixXd::Identity(J.rows(), J.rows()) + J * J.transpose();
  // sqrt(det g) is the product of the Cholesky diagonal.
  const Eigen::LLT<Eigen::MatrixXd> llt(g);
  return llt.matrixL().toDenseMatrix().diagonal().prod();
}

double reciprocal_check(const GraphJacobianSample& s) {
  const GrassPoint g = gauss_point(s);
  const auto p = static_cast<int>(s.J.rows());
  const auto q = static_cast<int>(s.J.cols());
  return std::abs(w_product(g, base_plane(p, q)) * slope(s.J) - 1.0);
}

CheckReport hemisphere_report(std::span<const GraphJacobianSample> samples, double beta0) {
  if (!(beta0 >= 1.0)) throw DomainError("hemisphere_report: beta0 must be at least 1");
  require_uniform_shape(samples);
  const int p = static_cast<int>(samples.front().J.rows());
  const int q = static_cast<int>(samples.front().J.cols());
  const GrassPoint w0 = base_plane(p, q);
  CheckReport report;
  report.check = "hemisphere";
  report.samples = samples.size();
  report.parameters = {{"beta0", beta0}, {"p", p}, {"q", q}};
  double max_slope = 0.0;
  double min_w = 2.0;
  std::size_t violations = 0;
  nlohmann::json flagged = nlohmann::json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = slope(samples[i].J);
    const double w = w_product(gauss_point(samples[i]), w0);
    max_slope = std::max(max_slope, d);
    min_w = std::min(min_w, w);
    if (d > beta0) {
      ++violations;
      if (flagged.size() < 10) flagged.push_back({{"index", i}, {"x", to_std(samples[i].x)}, {"slope", d}});
    }
  }
  report.passed = violations == 0 && min_w >= 1.0 / beta0 - 1e-12;
  report.worst_case = {{"max_slope", max_slope},
                       {"min_w_product", min_w},
                       {"lower_bound", 1.0 / beta0},
                       {"slope_violations", violations},
                       {"flagged", flagged}};
  return report;
}

GraphSampler blow_down(const GraphSampler& f, double t) {
  if (!(t > 0.0)) throw DomainError("blow_down: t must be positive");
  GraphSampler out;
  out.name = f.name + "_t";
  out.p = f.p;
  out.q = f.q;
  auto value = f.value;
  auto jac = f.jacobian;
  out.value = [value, t](const Eigen::VectorXd& x) { return Eigen::VectorXd(value(t * x) / t); };
  out.jacobian = [jac, t](const Eigen::VectorXd& x) { return jac(t * x); };
  return out;
}

GraphSampler affine_sampler(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() != b.size() || A.rows() < 1 || A.cols() < 1) throw DomainError("affine_sampler: shape mismatch");
  GraphSampler out;
  out.name = "affine";
  out.p = static_cast<int>(A.cols());
  out.q = static_cast<int>(A.rows());
  out.value = [A, b](const Eigen::VectorXd& x) { return Eigen::VectorXd(A * x + b); };
  out.jacobian = [A](const Eigen::VectorXd&) { return Eigen::MatrixXd(A.transpose()); };
  return out;
}

GraphSampler sincos_sampler() {
  GraphSampler out;
  out.name = "sincos";
  out.p = 2;
  out.q = 2;
  out.value = [](const Eigen::VectorXd& x) { return Eigen::VectorXd(Eigen::Vector2d(std::sin(x(0)), std::cos(x(1)))); };
  out.jacobian = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2, 2);
    J(0, 0) = std::cos(x(0));
    J(1, 1) = -std::sin(x(1));
    return J;
  };
  return out;
}

GraphSampler quadratic_sampler(int p) {
  if (p < 1) throw DomainError("quadratic_sampler: p must be positive");
  GraphSampler out;
  out.name = "quadratic";
  out.p = p;
  out.q = 2;
  out.value = [](const Eigen::VectorXd& x) { return Eigen::VectorXd(Eigen::Vector2d(x.squaredNorm(), 0.0)); };
  out.jacobian = [p](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(p, 2);
    J.col(0) = 2.0 * x;
    return J;
  };
  return out;
}

GraphSampler perturbed_sampler() {
  constexpr double a = 0.4;
  GraphSampler out;
  out.name = "perturbed";
  out.p = 4;
  out.q = 2;
  out.value = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(Eigen::Vector2d(a * std::sin(x(0) + 0.5 * x(2)), a * std::cos(x(1) - 0.5 * x(3))));
  };
  out.jacobian = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4, 2);
    const double c = a * std::cos(x(0) + 0.5 * x(2));
    const double s = -a * std::sin(x(1) - 0.5 * x(3));
    J(0, 0) = c;
    J(2, 0) = 0.5 * c;
    J(1, 1) = s;
    J(3, 1) = -0.5 * s;
    return J;
  };
  return out;
}

GraphSampler builtin_sampler(const std::string& name) {
  if (name == "affine") {
    Eigen::MatrixXd A(2, 2);
    A << 0.5, -0.25, 0.75, 0.3;
    return affine_sampler(A, Eigen::Vector2d(1.0, -2.0));
  }
  if (name == "sincos") return sincos_sampler();
  if (name == "quadratic") return quadratic_sampler(2);
  if (name == "perturbed") return perturbed_sampler();
  throw DomainError("unknown builtin sampler '" + name + "'");
}

std::vector<GraphJacobianSample> scan_grid(const GraphSampler& f, double half_width, int points_per_axis) {
  if (f.p < 1 || f.p > 4) throw DomainError("scan_grid: p must lie in [1, 4]");
  if (points_per_axis < 1 || !(half_width >= 0.0)) throw DomainError("scan_grid: invalid grid");
  std::size_t total = 1;
  for (int i = 0; i < f.p; ++i) total *= static_cast<std::size_t>(points_per_axis);
  std::vector<GraphJacobianSample> out;
  out.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(f.p), 0);
  for (std::size_t k = 0; k < total; ++k) {
    Eigen::VectorXd x(f.p);
    for (int i = 0; i < f.p; ++i) {
      x(i) = points_per_axis == 1
                 ? 0.0
                 : -half_width + 2.0 * half_width * idx[static_cast<std::size_t>(i)] / (points_per_axis - 1);
    }
    out.push_back(f.sample(x));
    for (int i = f.p - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < points_per_axis) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return out;
}

std::vector<GraphJacobianSample> read_jacobian_grid(std::istream& in) {
  std::vector<GraphJacobianSample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto semi = line.find(';');
    if (semi == std::string::npos) throw DomainError("grid line " + std::to_string(line_no) + ": missing ';'");
    auto parse = [&](const std::string& text) {
      std::istringstream is(text);
      std::vector<double> vals;
      std::string tok;
      while (is >> tok) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(tok, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != tok.size()) throw DomainError("grid line " + std::to_string(line_no) + ": bad number '" + tok + "'");
        vals.push_back(v);
      }
      return vals;
    };
    const std::vector<double> xs = parse(line.substr(0, semi));
    const std::vector<double> js = parse(line.substr(semi + 1));
    if (xs.empty() || js.empty() || js.size() % xs.size() != 0) {
      throw DomainError("grid line " + std::to_string(line_no) + ": expected p coordinates and p*q entries");
    }
    const auto p = static_cast<Eigen::Index>(xs.size());
    const auto q = static_cast<Eigen::Index>(js.size() / xs.size());
    GraphJacobianSample s;
    s.x = Eigen::Map<const Eigen::VectorXd>(xs.data(), p);
    s.J.resize(p, q);
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index a = 0; a < q; ++a) s.J(i, a) = js[static_cast<std::size_t>(i * q + a)];
    }
    require_sample(s);
    if (!out.empty() && (out.front().J.rows() != p || out.front().J.cols() != q)) {
      throw DomainError("grid line " + std::to_string(line_no) + ": shape differs from earlier rows");
    }
    out.push_back(std::move(s));
  }
  return out;
}

double gauss_spread(std::span<const GraphJacobianSample> samples, std::size_t max_points) {
  if (samples.empty()) return 0.0;
  const std::size_t stride = std::max<std::size_t>(1, (samples.size() + max_points - 1) / std::max<std::size_t>(1, max_points));
  std::vector<GrassPoint> pts;
  for (std::size_t i = 0; i < samples.size(); i += stride) pts.push_back(gauss_point(samples[i]));
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, dist(pts[i], pts[j]));
  }
  return best;
}

CheckReport bernstein_verdict(std::span<const GraphJacobianSample> samples, double beta0,
                              std::optional<double> epsilon) {
  if (!(beta0 >= 1.0)) throw DomainError("bernstein_verdict: beta0 must be at least 1");
  require_uniform_shape(samples);
  const int p = static_cast<int>(samples.front().J.rows());
  const int q = static_cast<int>(samples.front().J.cols());
  if (q != 2) throw DomainError("bernstein_verdict: only codimension 2 is supported");
  const double eps = epsilon.value_or(std::asin(std::clamp(1.0 / beta0 - 1e-6, 0.0, 1.0)));
  if (!(std::sin(eps) < 1.0 / beta0)) throw DomainError("bernstein_verdict: need sin(epsilon) < 1/beta0");
  const GrassPoint w0 = base_plane(p, q);
  const Region region = build_codim2_region(w0, eps);

  double max_slope = 0.0;
  double min_w = 2.0;
  std::size_t slope_violations = 0;
  std::size_t outside = 0;
  nlohmann::json flagged = nlohmann::json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = slope(samples[i].J);
    const GrassPoint g = gauss_point(samples[i]);
    const double w = w_product(g, w0);
    const bool in = region.contains(g);
    max_slope = std::max(max_slope, d);
    min_w = std::min(min_w, w);
    if (d > beta0) ++slope_violations;
    if (!in) ++outside;
    if ((d > beta0 || !in) && flagged.size() < 10) {
      flagged.push_back({{"index", i}, {"x", to_std(samples[i].x)}, {"slope", d}, {"inside_region", in}});
    }
  }
  CheckReport report;
  report.check = "bernstein_verdict";
  report.samples = samples.size();
  report.passed = slope_violations == 0 && outside == 0;
  report.parameters = {{"beta0", beta0}, {"epsilon", eps}, {"p", p}, {"q", q},
                       {"assumption", "the graph is minimal; samples only test the slope hypothesis"}};
  report.worst_case = {
      {"verdict", report.passed ? "hypotheses hold on the samples: graph predicted affine"
                                : "hypotheses violated at the flagged samples"},
      {"max_slope", max_slope},
      {"min_w_product", min_w},
      {"slope_violations", slope_violations},
      {"outside_region", outside},
      {"gauss_spread", gauss_spread(samples)},
      {"flagged", flagged}};
  return report;
}

}  // namespace grasskit
