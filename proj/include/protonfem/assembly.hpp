#pragma once

#include <Eigen/Sparse>

#include <functional>
#include <memory>
#include <vector>

#include "protonfem/fespace.hpp"
#include "protonfem/materials.hpp"
#include "protonfem/mesh.hpp"

namespace protonfem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Inflow data g on Gamma_- together with sup g (the VI upper bound).
struct InflowData {
  ScalarFunction g;
  double sup = 0.0;
};

/// Everything that defines the continuous transport problem.
struct TransportProblem {
  Domain domain;
  MaterialField materials{BraggKleeman{}};
  ScatterModel scatter;
  InflowData inflow;
  ScalarFunction source;  // empty means f = 0
};

/// Problem data bound to a mesh: per-cell SUPG parameter and the norm's mu.
struct TransportCoefficients {
  std::shared_ptr<const TransportProblem> problem;
  std::vector<double> delta;  // per cell
  double mu = 0.0;

  [[nodiscard]] const Domain& domain() const { return problem->domain; }
  [[nodiscard]] double epsilon() const { return problem->scatter.epsilon; }
  [[nodiscard]] bool has_source() const { return static_cast<bool>(problem->source); }
};

/// delta_K = h_K / (2 (|omega| + |mean_K S|)), mean by volume quadrature;
/// mu = min over materials of -S'(E_min). Throws ConfigError when
/// epsilon > 0 with one spatial dimension.
TransportCoefficients make_coefficients(const FeSpace& space,
                                        std::shared_ptr<const TransportProblem> problem,
                                        int degree = 4);

/// Stopping power and its energy derivative at a mesh point.
struct StoppingSample {
  double s = 0.0;
  double ds = 0.0;
};
StoppingSample stopping_at(const TransportProblem& problem, const Point& x);

struct ValueGrad {
  double value = 0.0;
  Point grad{};  // in mesh coordinates (spatial..., E)
};

/// Value/gradient of a field at quadrature point `x` (barycentric `bary`) of `cell`.
using FieldSampler = std::function<ValueGrad(int cell, const Point& x, const std::array<double, 4>& bary)>;

FieldSampler discrete_sampler(const NodalField& field);
/// Samples an analytic function given with its gradient.
FieldSampler analytic_sampler(std::function<ValueGrad(const Point&)> f);
/// a - b.
FieldSampler difference_sampler(FieldSampler a, FieldSampler b);

/// omega·grad_x u - S'(E) u - S(E) d_E u.
double transport_operator(const TransportProblem& problem, const Point& x, const ValueGrad& u,
                          const StoppingSample& s);

struct AssemblyOptions {
  bool diffusion = true;
  bool transport = true;
  bool stabilisation = true;
  bool boundary = true;
  int volume_degree = 4;
  int facet_degree = 4;
};

struct LinearSystem {
  SparseMatrix matrix;
  Vector rhs;
};

/// Matrix of A(u,v) + B_h(u,v) and load l(v). Inflow facets carry the
/// weight -1/2 (omega·n_x - S n_E); transverse facets contribute nothing.
LinearSystem assemble_system(const FeSpace& space, const TransportCoefficients& coeffs,
                             const AssemblyOptions& options = {});

/// r_i = A(u, phi_i) + B_h(u, phi_i) for a general (possibly analytic) u.
Vector form_action(const FeSpace& space, const TransportCoefficients& coeffs, const FieldSampler& u,
                   const AssemblyOptions& options = {});

/// u^T M u.
double quadratic_form(const SparseMatrix& matrix, std::span<const double> u);

/// L(u_h) at each volume quadrature point, flattened cell-major.
struct ResidualSamples {
  std::vector<double> values;
  std::size_t points_per_cell = 0;
};
ResidualSamples transport_residual(const FeSpace& space, const TransportCoefficients& coeffs,
                                   const NodalField& field, int degree = 4);

/// Squared contributions of the energy norm.
struct EnergyNormTerms {
  double diffusion = 0.0;      // eps |grad_omega u|^2
  double reaction = 0.0;       // mu |u|^2
  double stabilisation = 0.0;  // sum delta_K |L u|^2_K
  double boundary = 0.0;       // 1/2 int_{Gamma+} (omega·n_x - S n_E) u^2
  double inverse_delta = 0.0;  // sum delta_K^-1 |u|^2_K (star norm only)

  [[nodiscard]] double energy_squared() const { return diffusion + reaction + stabilisation + boundary; }
  [[nodiscard]] double star_squared() const { return energy_squared() + inverse_delta; }
};

EnergyNormTerms energy_norm_terms(const FeSpace& space, const TransportCoefficients& coeffs,
                                  const FieldSampler& u, int degree = 4);
/// Throws ConfigError when mu <= 0.
double energy_norm(const FeSpace& space, const TransportCoefficients& coeffs, const FieldSampler& u,
                   int degree = 4);
double star_norm(const FeSpace& space, const TransportCoefficients& coeffs, const FieldSampler& u,
                 int degree = 4);

/// Consistent P1 mass matrix.
SparseMatrix assemble_mass(const FeSpace& space, int degree = 2);
/// Load vector int f phi_i.
Vector assemble_load(const FeSpace& space, const ScalarFunction& f, int degree = 4);

/// (row, col, value) triples, one per line.
void write_matrix_triples(std::ostream& os, const SparseMatrix& matrix);

}  // namespace protonfem
