#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "protonfem/analytic.hpp"
#include "protonfem/assembly.hpp"
#include "protonfem/dose.hpp"
#include "protonfem/solvers.hpp"

namespace protonfem {

enum class InflowKind {
  Exact,  // pristine Bragg fluence on the whole inflow boundary (homogeneous media)
  Beam    // spectrum × lateral profile on spatial inflow faces, zero on E = E_max
};

struct InflowSpec {
  InflowKind kind = InflowKind::Exact;
  double e0 = 62.0;
  double delta = 0.01;
  double phi = 1.21e9;
  std::optional<LateralProfile> lateral;
};

struct AdaptivitySpec {
  bool enabled = false;
  double theta = 0.01;
  int max_levels = 4;
  std::optional<double> target_error;
};

/// A complete, validated run description.
struct Scenario {
  std::string name = "scenario";
  Domain domain;
  std::vector<int> resolution;
  MaterialField materials{BraggKleeman{}};
  ScatterModel scatter;
  InflowSpec inflow;
  std::optional<double> source_constant;
  SolverKind solver = SolverKind::Vi;
  ViOptions vi;
  DoseRepresentation dose_projection = DoseRepresentation::GalerkinNodal;
  std::vector<int> dose_resolution;
  AdaptivitySpec adaptivity;
  int convergence_levels = 4;

  std::string canonical_json;  // normalised form, used for hashing
};

/// Parse a JSON scenario. Throws ConfigError listing every violated field.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

std::vector<std::string> preset_names();
/// JSON text of a built-in scenario; throws NotFoundError for unknown names.
std::string preset_json(const std::string& name);
Scenario preset_scenario(const std::string& name);

/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

GaussianSpectrum make_spectrum(const Scenario& s);
std::shared_ptr<TransportProblem> make_problem(const Scenario& s);

/// Analytic fluence when one exists (homogeneous medium, ε = 0, exact inflow, f = 0).
std::optional<ExactFluence> exact_solution(const Scenario& s);

/// Structured mesh with grid lines on layer interfaces.
Mesh initial_mesh(const Scenario& s, int refinement = 0);

/// Uniform P1 dose space over the spatial box.
std::shared_ptr<const FeSpace> dose_space(const Scenario& s);

}  // namespace protonfem
