#include "protonfem/dose.hpp"

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

// Integrand averages over each cell and the P1 load vector, in one pass.
struct CellIntegrals {
  std::vector<double> cell_integral;
  Vector load;
};

CellIntegrals integrate(const DoseIntegrand& integrand, const FeSpace& space, int degree) {
  const QuadratureRule rule = quadrature_for(degree, space.dim());
  const double fact = factorial(space.dim());
  CellIntegrals out;
  out.cell_integral.assign(space.num_cells(), 0.0);
  out.load = Vector::Zero(space.num_nodes());
  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = space.geometry(c).volume * fact;
    const auto& nodes = space.cell_nodes(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& bary = rule.points[q];
      const double w = rule.weights[q] * scale;
      const double v = integrand(space.map_to_physical(c, bary));
      out.cell_integral[c] += w * v;
      for (int i = 0; i <= space.dim(); ++i) out.load[nodes[i]] += w * v * bary[i];
    }
  }
  return out;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

EnergyQuadrature EnergyQuadrature::trapezoid(std::vector<double> nodes) {
  if (nodes.size() < 2) throw ConfigError("energy quadrature: at least two nodes required");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) throw ConfigError("energy quadrature: nodes must increase strictly");
  }
  EnergyQuadrature q;
  q.weights.assign(nodes.size(), 0.0);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double h = nodes[i] - nodes[i - 1];
    q.weights[i - 1] += 0.5 * h;
    q.weights[i] += 0.5 * h;
  }
  q.nodes = std::move(nodes);
  return q;
}

EnergyQuadrature EnergyQuadrature::uniform(Interval energy, int n) {
  if (n < 2) throw ConfigError("energy quadrature: at least two nodes required");
  std::vector<double> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = energy.lo + energy.length() * i / (n - 1);
  nodes.back() = energy.hi;
  return trapezoid(std::move(nodes));
}

double EnergyQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

EnergyQuadrature energy_levels(const Mesh& mesh) {
  const int d = mesh.dim();
  std::vector<double> e;
  e.reserve(mesh.num_vertices());
  for (const Point& v : mesh.vertices()) e.push_back(v[d - 1]);
  std::sort(e.begin(), e.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(e.back() - e.front()));
  std::vector<double> levels;
  for (double x : e) {
    if (levels.empty() || x - levels.back() > tol) levels.push_back(x);
  }
  return EnergyQuadrature::trapezoid(std::move(levels));
}

DoseIntegrand dose_integrand(ScalarFunction fluence, const MaterialField& materials, EnergyQuadrature equad,
                             int spatial_dim) {
  return [fluence = std::move(fluence), materials, equad = std::move(equad), spatial_dim](const Point& x) {
    const BraggKleeman& mat = materials.at(std::span<const double>(x.data(), spatial_dim));
    Point y{};
    for (int k = 0; k < spatial_dim; ++k) y[k] = x[k];
    double sum = 0.0;
    for (std::size_t q = 0; q < equad.nodes.size(); ++q) {
      y[spatial_dim] = equad.nodes[q];
      sum += equad.weights[q] * stopping_power(mat, equad.nodes[q]) * fluence(y);
    }
    return sum / mat.rho;
  };
}

ScalarFunction fluence_function(const NodalField& field) {
  return [&field](const Point& x) { return evaluate(field, x); };
}

std::vector<double> dose_integrand_samples(const DoseIntegrand& integrand, std::span<const Point> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const Point& x : points) out.push_back(integrand(x));
  return out;
}

const char* to_string(DoseRepresentation rep) {
  switch (rep) {
    case DoseRepresentation::GalerkinNodal:
      return "galerkin";
    case DoseRepresentation::ElementConstant:
      return "element-constant";
    case DoseRepresentation::ViNodal:
      return "vi";
  }
  return "unknown";
}

DoseRepresentation parse_dose_representation(const std::string& name) {
  if (name == "galerkin") return DoseRepresentation::GalerkinNodal;
  if (name == "element-constant") return DoseRepresentation::ElementConstant;
  if (name == "vi") return DoseRepresentation::ViNodal;
  throw ConfigError("dose.projection: expected galerkin, element-constant or vi, got '" + name + "'");
}

DoseField dose_galerkin(const DoseIntegrand& integrand, std::shared_ptr<const FeSpace> space, int degree) {
  const CellIntegrals ints = integrate(integrand, *space, degree);
  const LinearSolution sol = solve_supg(assemble_mass(*space), ints.load);
  DoseField out;
  out.space = std::move(space);
  out.representation = DoseRepresentation::GalerkinNodal;
  out.values = to_std(sol.x);
  out.report = sol.report;
  return out;
}

DoseField dose_element_constant(const DoseIntegrand& integrand, std::shared_ptr<const FeSpace> space,
                                int degree) {
  const CellIntegrals ints = integrate(integrand, *space, degree);
  DoseField out;
  out.representation = DoseRepresentation::ElementConstant;
  out.values.resize(space->num_cells());
  for (int c = 0; c < space->num_cells(); ++c) out.values[c] = ints.cell_integral[c] / space->geometry(c).volume;
  out.report.method = "cell-average";
  out.space = std::move(space);
  return out;
}

DoseField dose_vi(const DoseIntegrand& integrand, std::shared_ptr<const FeSpace> space, const ViOptions& options,
                  int degree) {
  const CellIntegrals ints = integrate(integrand, *space, degree);
  DoseField out;
  out.bounds = BoundSet::uniform(static_cast<std::size_t>(space->num_nodes()), 0.0);
  const LinearSolution sol = solve_vi(assemble_mass(*space), ints.load, out.bounds, options);
  out.space = std::move(space);
  out.representation = DoseRepresentation::ViNodal;
  out.values = to_std(sol.x);
  out.report = sol.report;
  return out;
}

DoseField compute_dose(DoseRepresentation rep, const DoseIntegrand& integrand, std::shared_ptr<const FeSpace> space,
                       const ViOptions& options) {
  switch (rep) {
    case DoseRepresentation::GalerkinNodal:
      return dose_galerkin(integrand, std::move(space));
    case DoseRepresentation::ElementConstant:
      return dose_element_constant(integrand, std::move(space));
    case DoseRepresentation::ViNodal:
      return dose_vi(integrand, std::move(space), options);
  }
  throw ConfigError("unknown dose representation");
}

double dose_value(const DoseField& dose, const Point& x) {
  const CellLocation loc = locate_point(dose.space->mesh(), x);
  if (dose.representation == DoseRepresentation::ElementConstant) return dose.values[loc.cell];
  const auto& nodes = dose.space->cell_nodes(loc.cell);
  double v = 0.0;
  for (int i = 0; i <= dose.space->dim(); ++i) v += loc.barycentric[i] * dose.values[nodes[i]];
  return v;
}

double dose_l2_error(const DoseField& dose, const ScalarFunction& exact, int degree) {
  const FeSpace& space = *dose.space;
  const QuadratureRule rule = quadrature_for(degree, space.dim());
  const double fact = factorial(space.dim());
  double sum = 0.0;
  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = space.geometry(c).volume * fact;
    const auto& nodes = space.cell_nodes(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& bary = rule.points[q];
      double dh;
      if (dose.representation == DoseRepresentation::ElementConstant) {
        dh = dose.values[c];
      } else {
        dh = 0.0;
        for (int i = 0; i <= space.dim(); ++i) dh += bary[i] * dose.values[nodes[i]];
      }
      const double diff = dh - exact(space.map_to_physical(c, bary));
      sum += rule.weights[q] * scale * diff * diff;
    }
  }
  return std::sqrt(sum);
}

void write_dose_csv(std::ostream& os, const DoseField& dose) {
  const FeSpace& space = *dose.space;
  const int d = space.dim();
  os << std::setprecision(17);
  os << "# representation: " << to_string(dose.representation) << '\n';
  static const char* names[] = {"x0", "x1", "x2"};
  for (int k = 0; k < d; ++k) os << names[k] << ',';
  os << "dose\n";
  if (dose.representation == DoseRepresentation::ElementConstant) {
    for (int c = 0; c < space.num_cells(); ++c) {
      const Point x = space.mesh().cell_centroid(c);
      for (int k = 0; k < d; ++k) os << x[k] << ',';
      os << dose.values[c] << '\n';
    }
  } else {
    for (int i = 0; i < space.num_nodes(); ++i) {
      const Point& x = space.node(i);
      for (int k = 0; k < d; ++k) os << x[k] << ',';
      os << dose.values[i] << '\n';
    }
  }
}

}  // namespace protonfem
