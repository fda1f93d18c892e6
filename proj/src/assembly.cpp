#include "protonfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
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

// Calls f(cell, x, bary, weight) for each volume quadrature point; weight
// includes the affine Jacobian.
template <class F>
void for_each_volume_point(const FeSpace& space, const QuadratureRule& rule, F&& f) {
  const double fact = factorial(space.dim());
  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = space.geometry(c).volume * fact;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& bary = rule.points[q];
      f(c, space.map_to_physical(c, bary), bary, rule.weights[q] * scale);
    }
  }
}

// Calls f(facet, cell, x, cell_bary, weight) for boundary facets carrying `tag`.
template <class F>
void for_each_facet_point(const FeSpace& space, FacetTag tag, int degree, F&& f) {
  const Mesh& mesh = space.mesh();
  const int d = mesh.dim();
  const QuadratureRule rule = quadrature_for(degree, d - 1);
  const double fact = factorial(d - 1);
  for (const auto& facet : mesh.boundary_facets()) {
    if (facet.tag != tag) continue;
    const double scale = facet.measure * fact;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Point x{};
      for (int k = 0; k < d; ++k) {
        const Point& v = mesh.vertex(facet.vertices[k]);
        for (int j = 0; j < 3; ++j) x[j] += rule.points[q][k] * v[j];
      }
      const auto bary = mesh.locator().barycentric(facet.cell, x);
      f(facet, facet.cell, x, bary, rule.weights[q] * scale);
    }
  }
}

double omega_dot(const Domain& dom, const Point& g) {
  double s = 0.0;
  for (int k = 0; k < dom.spatial_dim; ++k) s += dom.omega[k] * g[k];
  return s;
}

// (I - omega ⊗ omega) grad_x
Point projected_gradient(const Domain& dom, const Point& g) {
  const double wg = omega_dot(dom, g);
  Point p{};
  for (int k = 0; k < dom.spatial_dim; ++k) p[k] = g[k] - wg * dom.omega[k];
  return p;
}

double dot_spatial(const Domain& dom, const Point& a, const Point& b) {
  double s = 0.0;
  for (int k = 0; k < dom.spatial_dim; ++k) s += a[k] * b[k];
  return s;
}

double boundary_weight(const Domain& dom, const Point& normal, const StoppingSample& s) {
  return omega_dot(dom, normal) - s.s * normal[dom.spatial_dim];
}


}  // namespace

StoppingSample stopping_at(const TransportProblem& problem, const Point& x) {
  const int sd = problem.domain.spatial_dim;
  const BraggKleeman& mat = problem.materials.at(std::span<const double>(x.data(), sd));
  const double e = x[sd];
  return {stopping_power(mat, e), stopping_power_derivative(mat, e)};
}

TransportCoefficients make_coefficients(const FeSpace& space,
                                        std::shared_ptr<const TransportProblem> problem, int degree) {
  const Domain& dom = problem->domain;
  dom.validate();
  if (space.dim() != dom.total_dim()) {
    throw ConfigError("coefficients: mesh dimension does not match the domain");
  }
  if (dom.spatial_dim == 1 && problem->scatter.epsilon > 0.0) {
    throw ConfigError("scatter: epsilon > 0 requires two spatial dimensions");
  }
  if (problem->inflow.sup < 0.0) throw ConfigError("inflow: sup g must be non-negative");
  TransportCoefficients coeffs;
  coeffs.problem = problem;
  coeffs.delta.assign(space.num_cells(), 0.0);
  std::vector<double> s_int(space.num_cells(), 0.0);
  const QuadratureRule rule = quadrature_for(degree, space.dim());
  for_each_volume_point(space, rule, [&](int c, const Point& x, const auto&, double w) {
    s_int[c] += w * stopping_at(*problem, x).s;
  });
  double omega_norm = 0.0;
  for (double w : dom.omega) omega_norm += w * w;
  omega_norm = std::sqrt(omega_norm);
  for (int c = 0; c < space.num_cells(); ++c) {
    const auto& g = space.geometry(c);
    const double mean_s = std::abs(s_int[c] / g.volume);
    coeffs.delta[c] = g.diameter / (2.0 * (omega_norm + mean_s));
  }
  coeffs.mu = std::numeric_limits<double>::infinity();
  for (const BraggKleeman* m : problem->materials.all()) {
    coeffs.mu = std::min(coeffs.mu, dissipation_mu(*m, dom.energy.lo));
  }
  return coeffs;
}

FieldSampler discrete_sampler(const NodalField& field) {
  return [&field](int cell, const Point&, const std::array<double, 4>& bary) {
    return ValueGrad{value_in_cell(field, cell, bary), gradient_in_cell(field, cell)};
  };
}

FieldSampler analytic_sampler(std::function<ValueGrad(const Point&)> f) {
  return [f = std::move(f)](int, const Point& x, const std::array<double, 4>&) { return f(x); };
}

FieldSampler difference_sampler(FieldSampler a, FieldSampler b) {
  return [a = std::move(a), b = std::move(b)](int cell, const Point& x, const std::array<double, 4>& bary) {
    const ValueGrad ua = a(cell, x, bary);
    const ValueGrad ub = b(cell, x, bary);
    ValueGrad out;
    out.value = ua.value - ub.value;
    for (int k = 0; k < 3; ++k) out.grad[k] = ua.grad[k] - ub.grad[k];
    return out;
  };
}

double transport_operator(const TransportProblem& problem, const Point&, const ValueGrad& u,
                          const StoppingSample& s) {
  const Domain& dom = problem.domain;
  return omega_dot(dom, u.grad) - s.ds * u.value - s.s * u.grad[dom.spatial_dim];
}

LinearSystem assemble_system(const FeSpace& space, const TransportCoefficients& coeffs,
                             const AssemblyOptions& options) {
  const TransportProblem& prob = *coeffs.problem;
  const Domain& dom = prob.domain;
  const int d = space.dim();
  const int nloc = d + 1;
  const int sd = dom.spatial_dim;
  const double eps = prob.scatter.epsilon;
  const int n = space.num_nodes();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(space.num_cells()) * nloc * nloc);
  Vector rhs = Vector::Zero(n);

  const QuadratureRule rule = quadrature_for(options.volume_degree, d);
  std::array<double, 16> local{};
  int current = -1;
  auto flush = [&](int c) {
    const auto& nodes = space.cell_nodes(c);
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) triplets.emplace_back(nodes[i], nodes[j], local[i * 4 + j]);
    }
    local.fill(0.0);
  };

  for_each_volume_point(space, rule, [&](int c, const Point& x, const auto& bary, double w) {
    if (c != current) {
      if (current >= 0) flush(current);
      current = c;
    }
    const auto& g = space.geometry(c);
    const auto& nodes = space.cell_nodes(c);
    const StoppingSample s = stopping_at(prob, x);
    const double delta = coeffs.delta[c];
    std::array<double, 4> lphi{};
    std::array<Point, 4> pgrad{};
    for (int i = 0; i < nloc; ++i) {
      lphi[i] = omega_dot(dom, g.grad[i]) - s.ds * bary[i] - s.s * g.grad[i][sd];
      pgrad[i] = projected_gradient(dom, g.grad[i]);
    }
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) {
        double a = 0.0;
        if (options.diffusion && eps > 0.0) a += eps * dot_spatial(dom, pgrad[j], pgrad[i]);
        if (options.transport) a += lphi[j] * bary[i];
        if (options.stabilisation) a += delta * lphi[j] * lphi[i];
        local[i * 4 + j] += w * a;
      }
    }
    if (prob.source) {
      const double f = prob.source(x);
      for (int i = 0; i < nloc; ++i) {
        double r = 0.0;
        if (options.transport) r += f * bary[i];
        if (options.stabilisation) r += delta * f * lphi[i];
        rhs[nodes[i]] += w * r;
      }
    }
  });
  if (current >= 0) flush(current);

  if (options.boundary) {
    for_each_facet_point(space, FacetTag::Inflow, options.facet_degree,
                         [&](const BoundaryFacet& facet, int c, const Point& x, const auto& bary, double w) {
                           const StoppingSample s = stopping_at(prob, x);
                           const double wb = boundary_weight(dom, facet.normal, s);
                           const double gval = prob.inflow.g ? prob.inflow.g(x) : 0.0;
                           const auto& nodes = space.cell_nodes(c);
                           for (int i = 0; i < nloc; ++i) {
                             if (bary[i] == 0.0) continue;
                             for (int j = 0; j < nloc; ++j) {
                               triplets.emplace_back(nodes[i], nodes[j], -0.5 * w * wb * bary[i] * bary[j]);
                             }
                             rhs[nodes[i]] += -0.5 * w * wb * gval * bary[i];
                           }
                         });
  }

  LinearSystem sys;
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  sys.rhs = std::move(rhs);
  return sys;
}

Vector form_action(const FeSpace& space, const TransportCoefficients& coeffs, const FieldSampler& u,
                   const AssemblyOptions& options) {
  const TransportProblem& prob = *coeffs.problem;
  const Domain& dom = prob.domain;
  const int nloc = space.dim() + 1;
  const int sd = dom.spatial_dim;
  const double eps = prob.scatter.epsilon;
  Vector r = Vector::Zero(space.num_nodes());
  const QuadratureRule rule = quadrature_for(options.volume_degree, space.dim());
  for_each_volume_point(space, rule, [&](int c, const Point& x, const auto& bary, double w) {
    const auto& g = space.geometry(c);
    const auto& nodes = space.cell_nodes(c);
    const StoppingSample s = stopping_at(prob, x);
    const ValueGrad uv = u(c, x, bary);
    const double lu = transport_operator(prob, x, uv, s);
    const Point pu = projected_gradient(dom, uv.grad);
    for (int i = 0; i < nloc; ++i) {
      const double lphi = omega_dot(dom, g.grad[i]) - s.ds * bary[i] - s.s * g.grad[i][sd];
      double a = 0.0;
      if (options.diffusion && eps > 0.0) a += eps * dot_spatial(dom, pu, projected_gradient(dom, g.grad[i]));
      if (options.transport) a += lu * bary[i];
      if (options.stabilisation) a += coeffs.delta[c] * lu * lphi;
      r[nodes[i]] += w * a;
    }
  });
  if (options.boundary) {
    for_each_facet_point(space, FacetTag::Inflow, options.facet_degree,
                         [&](const BoundaryFacet& facet, int c, const Point& x, const auto& bary, double w) {
                           const StoppingSample s = stopping_at(prob, x);
                           const double wb = boundary_weight(dom, facet.normal, s);
                           const double uval = u(c, x, bary).value;
                           const auto& nodes = space.cell_nodes(c);
                           for (int i = 0; i < nloc; ++i) r[nodes[i]] += -0.5 * w * wb * uval * bary[i];
                         });
  }
  return r;
}

double quadratic_form(const SparseMatrix& matrix, std::span<const double> u) {
  Eigen::Map<const Vector> x(u.data(), static_cast<Eigen::Index>(u.size()));
  return x.dot(matrix * x);
}

ResidualSamples transport_residual(const FeSpace& space, const TransportCoefficients& coeffs,
                                   const NodalField& field, int degree) {
  const TransportProblem& prob = *coeffs.problem;
  const QuadratureRule rule = quadrature_for(degree, space.dim());
  ResidualSamples out;
  out.points_per_cell = rule.size();
  out.values.reserve(rule.size() * space.num_cells());
  for_each_volume_point(space, rule, [&](int c, const Point& x, const auto& bary, double) {
    const ValueGrad u{value_in_cell(field, c, bary), gradient_in_cell(field, c)};
    out.values.push_back(transport_operator(prob, x, u, stopping_at(prob, x)));
  });
  return out;
}

EnergyNormTerms energy_norm_terms(const FeSpace& space, const TransportCoefficients& coeffs,
                                  const FieldSampler& u, int degree) {
  const TransportProblem& prob = *coeffs.problem;
  const Domain& dom = prob.domain;
  const double eps = prob.scatter.epsilon;
  EnergyNormTerms t;
  const QuadratureRule rule = quadrature_for(degree, space.dim());
  for_each_volume_point(space, rule, [&](int c, const Point& x, const auto& bary, double w) {
    const ValueGrad uv = u(c, x, bary);
    const StoppingSample s = stopping_at(prob, x);
    if (eps > 0.0) {
      const Point pu = projected_gradient(dom, uv.grad);
      t.diffusion += w * eps * dot_spatial(dom, pu, pu);
    }
    const double u2 = uv.value * uv.value;
    t.reaction += w * coeffs.mu * u2;
    const double lu = transport_operator(prob, x, uv, s);
    t.stabilisation += w * coeffs.delta[c] * lu * lu;
    t.inverse_delta += w * u2 / coeffs.delta[c];
  });
  for_each_facet_point(space, FacetTag::Outflow, 4,
                       [&](const BoundaryFacet& facet, int c, const Point& x, const auto& bary, double w) {
                         const StoppingSample s = stopping_at(prob, x);
                         const double wb = boundary_weight(dom, facet.normal, s);
                         const double uv = u(c, x, bary).value;
                         t.boundary += 0.5 * w * wb * uv * uv;
                       });
  return t;
}

double energy_norm(const FeSpace& space, const TransportCoefficients& coeffs, const FieldSampler& u,
                   int degree) {
  if (!(coeffs.mu > 0.0)) throw ConfigError("energy norm requires mu = -S'(E_min) > 0 (p > 1)");
  return std::sqrt(energy_norm_terms(space, coeffs, u, degree).energy_squared());
}

double star_norm(const FeSpace& space, const TransportCoefficients& coeffs, const FieldSampler& u,
                 int degree) {
  if (!(coeffs.mu > 0.0)) throw ConfigError("star norm requires mu = -S'(E_min) > 0 (p > 1)");
  return std::sqrt(energy_norm_terms(space, coeffs, u, degree).star_squared());
}

SparseMatrix assemble_mass(const FeSpace& space, int degree) {
  const int nloc = space.dim() + 1;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(space.num_cells()) * nloc * nloc);
  const QuadratureRule rule = quadrature_for(degree, space.dim());
  for_each_volume_point(space, rule, [&](int c, const Point&, const auto& bary, double w) {
    const auto& nodes = space.cell_nodes(c);
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) triplets.emplace_back(nodes[i], nodes[j], w * bary[i] * bary[j]);
    }
  });
  SparseMatrix m(space.num_nodes(), space.num_nodes());
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

Vector assemble_load(const FeSpace& space, const ScalarFunction& f, int degree) {
  const int nloc = space.dim() + 1;
  Vector b = Vector::Zero(space.num_nodes());
  const QuadratureRule rule = quadrature_for(degree, space.dim());
  for_each_volume_point(space, rule, [&](int c, const Point& x, const auto& bary, double w) {
    const double fx = f(x);
    const auto& nodes = space.cell_nodes(c);
    for (int i = 0; i < nloc; ++i) b[nodes[i]] += w * fx * bary[i];
  });
  return b;
}

void write_matrix_triples(std::ostream& os, const SparseMatrix& matrix) {
  os << std::setprecision(17);
  for (int k = 0; k < matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace protonfem
