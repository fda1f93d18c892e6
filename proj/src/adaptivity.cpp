#include "protonfem/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "protonfem/error.hpp"

namespace protonfem {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

// Measure and diameter of a facet with `n` vertices (segment or triangle).
std::pair<double, double> facet_size(const Mesh& mesh, const std::array<int, 3>& v, int n) {
  double diam = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) diam = std::max(diam, distance(mesh.vertex(v[i]), mesh.vertex(v[j])));
  }
  if (n == 2) return {diam, diam};
  const Point& a = mesh.vertex(v[0]);
  const Point& b = mesh.vertex(v[1]);
  const Point& c = mesh.vertex(v[2]);
  const Point u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const Point w{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const Point x{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
  return {0.5 * std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), diam};
}

}  // namespace

double IndicatorField::total() const {
  double s = 0.0;
  for (double e : eta) s += e * e;
  return std::sqrt(s);
}

IndicatorField estimate(const FeSpace& space, const TransportCoefficients& coeffs, const NodalField& psi_h,
                        int degree) {
  const TransportProblem& prob = *coeffs.problem;
  const Domain& dom = prob.domain;
  std::vector<double> eta2(space.num_cells(), 0.0);

  const QuadratureRule rule = quadrature_for(degree, space.dim());
  const double fact = factorial(space.dim());
  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = space.geometry(c).volume * fact;
    const Point grad = gradient_in_cell(psi_h, c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& bary = rule.points[q];
      const Point x = space.map_to_physical(c, bary);
      const ValueGrad u{value_in_cell(psi_h, c, bary), grad};
      double r = transport_operator(prob, x, u, stopping_at(prob, x));
      if (prob.source) r -= prob.source(x);
      eta2[c] += rule.weights[q] * scale * r * r;
    }
  }

  const double eps = prob.scatter.epsilon;
  if (eps > 0.0 && dom.spatial_dim == 2) {
    const Point perp{-dom.omega[1], dom.omega[0], 0.0};
    const Mesh& mesh = space.mesh();
    for (const auto& f : mesh.interior_facets()) {
      const Point ga = gradient_in_cell(psi_h, f.cell_a);
      const Point gb = gradient_in_cell(psi_h, f.cell_b);
      const double jump = (ga[0] - gb[0]) * perp[0] + (ga[1] - gb[1]) * perp[1];
      const auto [measure, h_e] = facet_size(mesh, f.vertices, mesh.dim());
      const double term = eps * h_e * measure * jump * jump;
      eta2[f.cell_a] += term;
      eta2[f.cell_b] += term;
    }
  }

  IndicatorField out;
  out.eta.resize(eta2.size());
  for (std::size_t c = 0; c < eta2.size(); ++c) {
    out.eta[c] = std::sqrt(eta2[c]);
    out.max = std::max(out.max, out.eta[c]);
  }
  return out;
}

std::vector<int> mark(const IndicatorField& indicator, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("adaptivity.theta must lie in (0, 1]");
  const double threshold = theta * indicator.max;
  std::vector<int> out;
  for (std::size_t c = 0; c < indicator.eta.size(); ++c) {
    if (indicator.eta[c] >= threshold) out.push_back(static_cast<int>(c));
  }
  return out;
}

void write_adapt_csv(std::ostream& os, const AdaptReport& report) {
  os << std::setprecision(17) << "level,dofs,marked,eta_sum,energy_error\n";
  for (const auto& l : report.levels) {
    os << l.level << ',' << l.dofs << ',' << l.marked << ',' << l.eta_sum << ',';
    if (l.energy_error) os << *l.energy_error;
    os << '\n';
  }
}

AdaptResult adapt_loop(std::shared_ptr<const TransportProblem> problem, std::shared_ptr<const Mesh> initial,
                       const AdaptOptions& options) {
  if (options.max_levels < 0) throw ConfigError("adaptivity.max_levels must be non-negative");
  if (!(options.theta > 0.0 && options.theta <= 1.0)) throw ConfigError("adaptivity.theta must lie in (0, 1]");
  AdaptResult out;
  std::shared_ptr<const Mesh> mesh = std::move(initial);
  for (int level = 0;; ++level) {
    auto space = std::make_shared<const FeSpace>(mesh);
    TransportSolution sol = solve_transport(space, problem, options.solver, options.vi);
    const IndicatorField eta = estimate(*space, sol.coeffs, sol.fluence);

    AdaptLevel row;
    row.level = level;
    row.dofs = space->num_nodes();
    row.eta_sum = eta.total();
    if (options.oracle) row.energy_error = options.oracle(sol);

    const bool at_target =
        options.target_error && (row.energy_error ? *row.energy_error : row.eta_sum) <= *options.target_error;
    std::vector<int> marked;
    if (level < options.max_levels && !at_target) marked = mark(eta, options.theta);
    row.marked = static_cast<int>(marked.size());
    out.report.levels.push_back(row);
    out.space = space;
    out.solution = std::move(sol);
    if (marked.empty()) break;
    mesh = std::make_shared<const Mesh>(refine(*mesh, marked));
  }
  return out;
}

}  // namespace protonfem
