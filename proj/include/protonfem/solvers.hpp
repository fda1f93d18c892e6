#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "protonfem/assembly.hpp"

namespace protonfem {

struct LinearSolveReport {
  std::string method;
  double residual_norm = 0.0;
  int iterations = 0;  // 0 for a direct solve, outer iterations for the VI
  double wall_seconds = 0.0;

  // VI only
  double tolerance = 0.0;         // tol_c
  double complementarity = 0.0;   // final violation measure
  int active_lower = 0;
  int active_upper = 0;
  std::vector<double> violation_history;
};

enum class NodeState { Free, AtLower, AtUpper };

/// Per-node box [lower, upper] and the active flags of the last VI solve.
struct BoundSet {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<NodeState> state;

  static BoundSet uniform(std::size_t n, double lo,
                          double hi = std::numeric_limits<double>::infinity());
  [[nodiscard]] std::size_t size() const { return lower.size(); }
  /// Throws ConfigError when sizes differ or some lower > upper.
  void validate() const;
};

struct ViOptions {
  int max_outer = 200;
  double tolerance_factor = 1e-8;  // tol_c = factor * |rhs|_inf
};

struct LinearSolution {
  Vector x;
  LinearSolveReport report;
};

/// Sparse LU solve; ‖Ax - b‖₂ ≤ 1e-10 ‖b‖₂ or SolverError.
LinearSolution solve_supg(const SparseMatrix& a, const Vector& rhs);

/// Box-constrained complementarity problem via a reduced-space active set
/// iteration. On return `bounds.state` holds the final active flags and
///   x_i = lower_i  ⇒ r_i ≥ -tol_c,   x_i = upper_i ⇒ r_i ≤ tol_c,
///   otherwise |r_i| ≤ tol_c,  with r = A x - b.
LinearSolution solve_vi(const SparseMatrix& a, const Vector& rhs, BoundSet& bounds,
                        const ViOptions& options = {});

/// Largest complementarity violation of x with respect to the box.
double complementarity_violation(const SparseMatrix& a, const Vector& rhs, const Vector& x,
                                 const BoundSet& bounds);

std::pair<double, double> min_max_nodal(std::span<const double> values);

enum class SolverKind { Supg, Vi };

struct TransportSolution {
  TransportCoefficients coeffs;
  NodalField fluence;
  LinearSolveReport report;
  BoundSet bounds;  // box used (VI) or would be used (SUPG)
};

/// Assemble and solve on `space`. The box is [0, sup g] when f = 0 and
/// [0, ∞) otherwise.
TransportSolution solve_transport(std::shared_ptr<const FeSpace> space,
                                  std::shared_ptr<const TransportProblem> problem, SolverKind kind,
                                  const ViOptions& options = {});

const char* to_string(SolverKind kind);

}  // namespace protonfem
