#include "protonfem/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "protonfem/error.hpp"

namespace protonfem {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::ofstream open_output(const fs::path& dir, const std::string& name, RunSummary& summary) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::ofstream os(dir / name, std::ios::trunc);
  if (!os) throw IoError("cannot write '" + (dir / name).string() + "'");
  summary.files.push_back(name);
  return os;
}

void begin(RunSummary& summary, const Scenario& s, const char* command) {
  summary.command = command;
  summary.scenario_name = s.name;
  summary.scenario_hash = scenario_hash(s);
  summary.solver_kind = to_string(s.solver);
}

void record_solution(RunSummary& summary, const TransportSolution& sol, const TransportProblem& prob) {
  summary.dofs = sol.fluence.space->num_nodes();
  summary.cells = sol.fluence.space->num_cells();
  summary.solver = sol.report;
  const auto [lo, hi] = min_max_nodal(sol.fluence.coefficients);
  summary.fluence_min = lo;
  summary.fluence_max = hi;
  summary.g_sup = prob.inflow.sup;
}

void record_dose(RunSummary& summary, const DoseField& dose, const Domain& domain) {
  summary.dose_representation = to_string(dose.representation);
  if (dose.values.empty()) return;
  std::size_t imax = 0;
  double lo = dose.values[0];
  for (std::size_t i = 0; i < dose.values.size(); ++i) {
    lo = std::min(lo, dose.values[i]);
    if (dose.values[i] > dose.values[imax]) imax = i;
  }
  summary.dose_min = lo;
  summary.dose_max = dose.values[imax];
  const int c = static_cast<int>(imax);
  const Point x = dose.representation == DoseRepresentation::ElementConstant ? dose.space->mesh().cell_centroid(c)
                                                                               : dose.space->node(c);
  summary.dose_peak_depth = 0.0;
  for (int k = 0; k < domain.spatial_dim; ++k) summary.dose_peak_depth += domain.omega[k] * x[k];
}

DoseField make_dose(const Scenario& s, const TransportSolution& sol, DoseRepresentation rep) {
  const DoseIntegrand integrand = dose_integrand(fluence_function(sol.fluence), s.materials,
                                                 energy_levels(sol.fluence.space->mesh()), s.domain.spatial_dim);
  return compute_dose(rep, integrand, dose_space(s), s.vi);
}

void write_outputs(const Scenario& s, const TransportSolution& sol, const fs::path& out, RunSummary& summary) {
  {
    auto os = open_output(out, "fluence.csv", summary);
    write_nodal_csv(os, sol.fluence);
  }
  {
    auto os = open_output(out, "mesh.txt", summary);
    write_mesh(os, sol.fluence.space->mesh());
  }
  const DoseField dose = make_dose(s, sol, s.dose_projection);
  record_dose(summary, dose, s.domain);
  auto os = open_output(out, "dose.csv", summary);
  write_dose_csv(os, dose);
}

void record_errors(RunSummary& summary, const Scenario& s, const TransportSolution& sol) {
  if (const auto ex = exact_solution(s)) {
    const ErrorNorms e = error_norms(sol.fluence, *ex, sol.coeffs);
    summary.energy_error = e.energy;
    summary.l2_error = e.l2;
  }
}

void finish(RunSummary& summary, const fs::path& out, Clock::time_point t0) {
  summary.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  summary.files.push_back("summary.txt");
  std::ofstream os(out / "summary.txt", std::ios::trunc);
  if (!os) throw IoError("cannot write '" + (out / "summary.txt").string() + "'");
  write_summary(os, summary);
}

double max_diameter(const Mesh& mesh) {
  double h = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) h = std::max(h, mesh.cell_diameter(static_cast<int>(c)));
  return h;
}

}  // namespace

RunSummary run_scenario(const Scenario& s, const fs::path& out) {
  const auto t0 = Clock::now();
  RunSummary summary;
  begin(summary, s, "run");
  const auto prob = make_problem(s);
  auto space = std::make_shared<const FeSpace>(std::make_shared<const Mesh>(initial_mesh(s)));
  const TransportSolution sol = solve_transport(space, prob, s.solver, s.vi);
  record_solution(summary, sol, *prob);
  record_errors(summary, s, sol);
  write_outputs(s, sol, out, summary);
  finish(summary, out, t0);
  return summary;
}

RunSummary converge_scenario(const Scenario& s, const fs::path& out) {
  const auto t0 = Clock::now();
  RunSummary summary;
  begin(summary, s, "converge");
  const auto ex = exact_solution(s);
  if (!ex) {
    throw ConfigError("converge needs the analytic benchmark: homogeneous medium, epsilon = 0, exact inflow, no source");
  }
  const auto prob = make_problem(s);
  std::vector<double> log_h, log_e;
  auto os = open_output(out, "convergence.csv", summary);
  os << std::setprecision(17) << "level,dofs,energy_error,l2_error,slope\n";
  for (int level = 0; level < s.convergence_levels; ++level) {
    auto mesh = std::make_shared<const Mesh>(initial_mesh(s, level));
    auto space = std::make_shared<const FeSpace>(mesh);
    const TransportSolution sol = solve_transport(space, prob, s.solver, s.vi);
    const ErrorNorms e = error_norms(sol.fluence, *ex, sol.coeffs);
    log_h.push_back(std::log(max_diameter(*mesh)));
    log_e.push_back(std::log(e.energy));
    os << level << ',' << space->num_nodes() << ',' << e.energy << ',' << e.l2 << ',';
    if (level > 0) os << (log_e[level - 1] - log_e[level]) / (log_h[level - 1] - log_h[level]);
    os << '\n';
    record_solution(summary, sol, *prob);
    summary.energy_error = e.energy;
    summary.l2_error = e.l2;
  }
  os.close();
  summary.levels = s.convergence_levels;
  if (log_h.size() > 1) {
    const double n = static_cast<double>(log_h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_h.size(); ++i) {
      sx += log_h[i];
      sy += log_e[i];
      sxx += log_h[i] * log_h[i];
      sxy += log_h[i] * log_e[i];
    }
    summary.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  finish(summary, out, t0);
  return summary;
}

RunSummary adapt_scenario(const Scenario& s, const fs::path& out) {
  const auto t0 = Clock::now();
  RunSummary summary;
  begin(summary, s, "adapt");
  const auto prob = make_problem(s);
  AdaptOptions opts;
  opts.max_levels = s.adaptivity.max_levels;
  opts.theta = s.adaptivity.theta;
  opts.solver = s.solver;
  opts.vi = s.vi;
  opts.target_error = s.adaptivity.target_error;
  const auto ex = exact_solution(s);
  if (ex) {
    opts.oracle = [&ex](const TransportSolution& sol) { return error_norms(sol.fluence, *ex, sol.coeffs).energy; };
  }
  const AdaptResult result = adapt_loop(prob, std::make_shared<const Mesh>(initial_mesh(s)), opts);
  {
    auto os = open_output(out, "adapt_report.csv", summary);
    write_adapt_csv(os, result.report);
  }
  summary.levels = static_cast<int>(result.report.levels.size());
  record_solution(summary, result.solution, *prob);
  record_errors(summary, s, result.solution);
  write_outputs(s, result.solution, out, summary);
  finish(summary, out, t0);
  return summary;
}

RunSummary dose_scenario(const Scenario& s, const fs::path& out) {
  const auto t0 = Clock::now();
  RunSummary summary;
  begin(summary, s, "dose");
  const auto prob = make_problem(s);
  auto space = std::make_shared<const FeSpace>(std::make_shared<const Mesh>(initial_mesh(s)));
  const TransportSolution sol = solve_transport(space, prob, s.solver, s.vi);
  record_solution(summary, sol, *prob);
  record_errors(summary, s, sol);
  for (DoseRepresentation rep :
       {DoseRepresentation::GalerkinNodal, DoseRepresentation::ElementConstant, DoseRepresentation::ViNodal}) {
    const DoseField dose = make_dose(s, sol, rep);
    auto os = open_output(out, std::string("dose_") + to_string(rep) + ".csv", summary);
    write_dose_csv(os, dose);
    if (rep == s.dose_projection) record_dose(summary, dose, s.domain);
  }
  finish(summary, out, t0);
  return summary;
}

void write_summary(std::ostream& os, const RunSummary& s) {
  os << std::setprecision(10);
  os << "command: " << s.command << '\n';
  os << "scenario: " << s.scenario_name << '\n';
  os << "scenario_hash: " << s.scenario_hash << '\n';
  os << "solver: " << s.solver_kind << " (" << s.solver.method << ")\n";
  os << "dofs: " << s.dofs << '\n';
  os << "cells: " << s.cells << '\n';
  os << "levels: " << s.levels << '\n';
  os << "solver_iterations: " << s.solver.iterations << '\n';
  os << "solver_residual: " << s.solver.residual_norm << '\n';
  if (s.solver.method == "active-set") {
    os << "vi_complementarity: " << s.solver.complementarity << '\n';
    os << "vi_tolerance: " << s.solver.tolerance << '\n';
    os << "vi_active_lower: " << s.solver.active_lower << '\n';
    os << "vi_active_upper: " << s.solver.active_upper << '\n';
  }
  os << "fluence_min: " << s.fluence_min << '\n';
  os << "fluence_max: " << s.fluence_max << '\n';
  os << "g_sup: " << s.g_sup << '\n';
  if (!s.dose_representation.empty()) {
    os << "dose_representation: " << s.dose_representation << '\n';
    os << "dose_min: " << s.dose_min << '\n';
    os << "dose_max: " << s.dose_max << '\n';
    os << "dose_peak_depth: " << s.dose_peak_depth << '\n';
  }
  if (s.energy_error) os << "energy_error: " << *s.energy_error << '\n';
  if (s.l2_error) os << "l2_error: " << *s.l2_error << '\n';
  if (s.slope) os << "convergence_slope: " << *s.slope << '\n';
  os << "wall_seconds: " << s.wall_seconds << '\n';
  os << "files:";
  for (const auto& f : s.files) os << ' ' << f;
  os << '\n';
}

}  // namespace protonfem
