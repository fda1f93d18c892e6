#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "protonfem/solvers.hpp"

namespace protonfem {

struct IndicatorField {
  std::vector<double> eta;  // per cell, η_K ≥ 0
  double max = 0.0;

  /// (Σ η_K²)^½
  [[nodiscard]] double total() const;
};

/// η_K² = ‖L(ψ_h) - f‖²_K + ε Σ_{e ⊂ ∂K interior} h_e |e| [[∇_x ψ_h · ω⊥]]².
/// The jump term needs two spatial dimensions and ε > 0.
IndicatorField estimate(const FeSpace& space, const TransportCoefficients& coeffs, const NodalField& psi_h,
                        int degree = 4);

/// Cells with η_K ≥ θ max η, in increasing id order. Requires 0 < θ ≤ 1.
std::vector<int> mark(const IndicatorField& indicator, double theta);

struct AdaptLevel {
  int level = 0;
  int dofs = 0;
  int marked = 0;
  double eta_sum = 0.0;
  std::optional<double> energy_error;
};

struct AdaptReport {
  std::vector<AdaptLevel> levels;
};

/// CSV `level,dofs,marked,eta_sum,energy_error` (energy_error empty without an oracle).
void write_adapt_csv(std::ostream& os, const AdaptReport& report);

struct AdaptOptions {
  int max_levels = 4;  // N_max refinements
  double theta = 0.01;
  SolverKind solver = SolverKind::Vi;
  ViOptions vi;
  /// Stop once the oracle error (or η total without an oracle) reaches this value.
  std::optional<double> target_error;
  /// Energy-norm error of a level's solution against a reference, when known.
  std::function<double(const TransportSolution&)> oracle;
};

struct AdaptResult {
  std::shared_ptr<const FeSpace> space;
  TransportSolution solution;
  AdaptReport report;
};

/// Solve, estimate, mark and refine for levels 0..max_levels; stops early when
/// nothing is marked or the target error is met.
AdaptResult adapt_loop(std::shared_ptr<const TransportProblem> problem, std::shared_ptr<const Mesh> initial,
                       const AdaptOptions& options);

}  // namespace protonfem
