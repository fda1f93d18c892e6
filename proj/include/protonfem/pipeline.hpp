#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "protonfem/adaptivity.hpp"
#include "protonfem/scenario.hpp"

namespace protonfem {

struct RunSummary {
  std::string command;
  std::string scenario_name;
  std::string scenario_hash;
  int dofs = 0;
  int cells = 0;
  LinearSolveReport solver;
  std::string solver_kind;
  double fluence_min = 0.0;
  double fluence_max = 0.0;
  double g_sup = 0.0;
  std::string dose_representation;
  double dose_min = 0.0;
  double dose_max = 0.0;
  double dose_peak_depth = 0.0;  // ω·x at the dose maximum
  std::optional<double> energy_error;
  std::optional<double> l2_error;
  std::optional<double> slope;  // least-squares log error vs log h (converge)
  int levels = 1;
  double wall_seconds = 0.0;
  std::vector<std::string> files;  // written, relative to the output directory
};

/// Single solve: fluence.csv, dose.csv, mesh.txt, summary.txt.
RunSummary run_scenario(const Scenario& s, const std::filesystem::path& out);

/// Uniform refinement study against the analytic solution: convergence.csv and summary.txt.
RunSummary converge_scenario(const Scenario& s, const std::filesystem::path& out);

/// Adaptive loop: adapt_report.csv, final fluence.csv, dose.csv, mesh.txt, summary.txt.
RunSummary adapt_scenario(const Scenario& s, const std::filesystem::path& out);

/// Solve, then all three dose projections: dose_galerkin.csv,
/// dose_element-constant.csv, dose_vi.csv and summary.txt.
RunSummary dose_scenario(const Scenario& s, const std::filesystem::path& out);

void write_summary(std::ostream& os, const RunSummary& summary);

}  // namespace protonfem
