#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "protonfem/fespace.hpp"
#include "protonfem/materials.hpp"
#include "protonfem/solvers.hpp"

namespace protonfem {

/// Energy rule {ξ_q, w_q} for the dose integral.
struct EnergyQuadrature {
  std::string rule = "trapezoid";
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Composite trapezoid on sorted, distinct nodes.
  static EnergyQuadrature trapezoid(std::vector<double> nodes);
  static EnergyQuadrature uniform(Interval energy, int nodes);
  [[nodiscard]] double total_weight() const;
};

/// Trapezoid rule on the distinct energy coordinates of a space–energy mesh.
EnergyQuadrature energy_levels(const Mesh& mesh);

/// x (spatial) ↦ Σ_q w_q S(ξ_q) ψ(x, ξ_q) / ρ(x).
using DoseIntegrand = std::function<double(const Point&)>;

/// `fluence` takes mesh coordinates (x..., E).
DoseIntegrand dose_integrand(ScalarFunction fluence, const MaterialField& materials, EnergyQuadrature equad,
                             int spatial_dim);

/// Fluence field as a point function (point location per call).
ScalarFunction fluence_function(const NodalField& field);

std::vector<double> dose_integrand_samples(const DoseIntegrand& integrand, std::span<const Point> points);

enum class DoseRepresentation { GalerkinNodal, ElementConstant, ViNodal };

const char* to_string(DoseRepresentation rep);
/// "galerkin", "element-constant" or "vi"; throws ConfigError otherwise.
DoseRepresentation parse_dose_representation(const std::string& name);

struct DoseField {
  std::shared_ptr<const FeSpace> space;
  DoseRepresentation representation = DoseRepresentation::GalerkinNodal;
  std::vector<double> values;  // per node, or per cell for ElementConstant
  LinearSolveReport report;
  BoundSet bounds;  // ViNodal only
};

/// L² projection onto the P1 dose space.
DoseField dose_galerkin(const DoseIntegrand& integrand, std::shared_ptr<const FeSpace> space, int degree = 4);

/// Cell averages (1/|K|) ∫_K integrand.
DoseField dose_element_constant(const DoseIntegrand& integrand, std::shared_ptr<const FeSpace> space,
                                int degree = 4);

/// L² projection constrained to nonnegative nodal values.
DoseField dose_vi(const DoseIntegrand& integrand, std::shared_ptr<const FeSpace> space,
                  const ViOptions& options = {}, int degree = 4);

DoseField compute_dose(DoseRepresentation rep, const DoseIntegrand& integrand,
                       std::shared_ptr<const FeSpace> space, const ViOptions& options = {});

/// Dose at a spatial point (piecewise linear or piecewise constant).
double dose_value(const DoseField& dose, const Point& x);

/// ‖D_h - D‖_{L²} over the dose mesh.
double dose_l2_error(const DoseField& dose, const ScalarFunction& exact, int degree = 4);

/// Header comment `# representation: <tag>`, a column line, then one row per
/// node (or cell centroid) `x..., dose`.
void write_dose_csv(std::ostream& os, const DoseField& dose);

}  // namespace protonfem
