#include "protonfem/solvers.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "protonfem/error.hpp"

namespace protonfem {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// LU solve with up to two steps of iterative refinement.
Vector lu_solve(const SparseMatrix& a, const Vector& b, double rel_tol, double* residual) {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage());
  }
  Vector x = lu.solve(b);
  const double bnorm = b.norm();
  double res = (a * x - b).norm();
  for (int k = 0; k < 2 && res > rel_tol * bnorm; ++k) {
    x -= lu.solve(a * x - b);
    res = (a * x - b).norm();
  }
  if (!std::isfinite(res) || res > rel_tol * bnorm) {
    std::ostringstream msg;
    msg << "linear solve residual " << res << " exceeds " << rel_tol << " * |rhs| = " << rel_tol * bnorm
        << " (matrix may be singular)";
    throw SolverError(msg.str());
  }
  *residual = res;
  return x;
}

SparseMatrix select(const SparseMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols,
                    const std::vector<int>& col_map) {
  std::vector<int> row_map(a.rows(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) row_map[rows[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t jj = 0; jj < cols.size(); ++jj) {
    for (SparseMatrix::InnerIterator it(a, cols[jj]); it; ++it) {
      const int r = row_map[it.row()];
      if (r >= 0) t.emplace_back(r, col_map[cols[jj]], it.value());
    }
  }
  SparseMatrix s(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

}  // namespace

BoundSet BoundSet::uniform(std::size_t n, double lo, double hi) {
  BoundSet b;
  b.lower.assign(n, lo);
  b.upper.assign(n, hi);
  b.state.assign(n, NodeState::Free);
  return b;
}

void BoundSet::validate() const {
  if (upper.size() != lower.size() || state.size() != lower.size()) {
    throw ConfigError("bounds: lower, upper and state sizes differ");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) {
      std::ostringstream msg;
      msg << "bounds: lower > upper at node " << i;
      throw ConfigError(msg.str());
    }
  }
}

LinearSolution solve_supg(const SparseMatrix& a, const Vector& rhs) {
  if (a.rows() != a.cols() || a.rows() != rhs.size()) {
    throw SolverError("solve_supg: system dimensions do not match");
  }
  const auto t0 = Clock::now();
  LinearSolution out;
  out.report.method = "sparse-lu";
  if (rhs.size() == 0) return out;
  out.x = lu_solve(a, rhs, 1e-10, &out.report.residual_norm);
  out.report.wall_seconds = seconds_since(t0);
  return out;
}

double complementarity_violation(const SparseMatrix& a, const Vector& rhs, const Vector& x,
                                 const BoundSet& bounds) {
  const Vector r = a * x - rhs;
  double v = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double lo = bounds.lower[i];
    const double hi = bounds.upper[i];
    double vi;
    if (x[i] < lo) {
      vi = lo - x[i];
    } else if (x[i] > hi) {
      vi = x[i] - hi;
    } else if (x[i] == lo && x[i] == hi) {
      vi = 0.0;
    } else if (x[i] == lo) {
      vi = std::max(0.0, -r[i]);
    } else if (x[i] == hi) {
      vi = std::max(0.0, r[i]);
    } else {
      vi = std::abs(r[i]);
    }
    v = std::max(v, vi);
  }
  return v;
}

LinearSolution solve_vi(const SparseMatrix& a, const Vector& rhs, BoundSet& bounds,
                        const ViOptions& options) {
  const auto t0 = Clock::now();
  const Eigen::Index n = rhs.size();
  if (a.rows() != n || a.cols() != n) throw SolverError("solve_vi: system dimensions do not match");
  if (static_cast<Eigen::Index>(bounds.size()) != n) {
    throw ConfigError("solve_vi: bound set size does not match the system");
  }
  bounds.validate();

  LinearSolution out;
  out.report.method = "active-set";
  const double tol = options.tolerance_factor * (n > 0 ? rhs.lpNorm<Eigen::Infinity>() : 0.0);
  out.report.tolerance = tol;
  if (n == 0) return out;

  // Warm start from the unconstrained solution.
  double res = 0.0;
  Vector x = lu_solve(a, rhs, 1e-10, &res);
  auto& st = bounds.state;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x[i] < bounds.lower[i]) {
      st[i] = NodeState::AtLower;
    } else if (x[i] > bounds.upper[i]) {
      st[i] = NodeState::AtUpper;
    } else {
      st[i] = NodeState::Free;
    }
  }

  std::set<std::vector<NodeState>> seen;
  bool cautious = false;
  for (int outer = 1; outer <= options.max_outer; ++outer) {
    // Fixed nodes take their bound; free nodes solve the reduced system.
    std::vector<int> free_ids;
    std::vector<int> col_map(n, -1);
    Vector fixed = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (st[i] == NodeState::AtLower) {
        fixed[i] = bounds.lower[i];
      } else if (st[i] == NodeState::AtUpper) {
        fixed[i] = bounds.upper[i];
      } else {
        col_map[i] = static_cast<int>(free_ids.size());
        free_ids.push_back(static_cast<int>(i));
      }
    }
    x = fixed;
    if (!free_ids.empty()) {
      const Vector full_rhs = rhs - a * fixed;
      Vector b_f(static_cast<Eigen::Index>(free_ids.size()));
      for (std::size_t k = 0; k < free_ids.size(); ++k) b_f[k] = full_rhs[free_ids[k]];
      const SparseMatrix a_ff = select(a, free_ids, free_ids, col_map);
      double r_f = 0.0;
      const Vector x_f = lu_solve(a_ff, b_f, 1e-10, &r_f);
      for (std::size_t k = 0; k < free_ids.size(); ++k) x[free_ids[k]] = x_f[k];
    }
    const Vector r = a * x - rhs;

    // Primal violations enter the active set; wrong-sign multipliers leave it.
    std::vector<NodeState> next = st;
    int worst = -1;
    double worst_val = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      switch (st[i]) {
        case NodeState::Free:
          if (x[i] < bounds.lower[i]) {
            next[i] = NodeState::AtLower;
          } else if (x[i] > bounds.upper[i]) {
            next[i] = NodeState::AtUpper;
          }
          break;
        case NodeState::AtLower:
          if (r[i] < -tol && bounds.lower[i] < bounds.upper[i]) {
            if (!cautious) next[i] = NodeState::Free;
            if (-r[i] > worst_val) worst_val = -r[i], worst = static_cast<int>(i);
          }
          break;
        case NodeState::AtUpper:
          if (r[i] > tol && bounds.lower[i] < bounds.upper[i]) {
            if (!cautious) next[i] = NodeState::Free;
            if (r[i] > worst_val) worst_val = r[i], worst = static_cast<int>(i);
          }
          break;
      }
    }
    if (cautious && worst >= 0) next[worst] = NodeState::Free;

    // Report a feasible iterate.
    Vector xp = x;
    for (Eigen::Index i = 0; i < n; ++i) xp[i] = std::clamp(x[i], bounds.lower[i], bounds.upper[i]);
    const double violation = complementarity_violation(a, rhs, xp, bounds);
    out.report.violation_history.push_back(violation);
    out.report.iterations = outer;

    if (next == st) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (st[i] == NodeState::AtLower) xp[i] = bounds.lower[i];
        if (st[i] == NodeState::AtUpper) xp[i] = bounds.upper[i];
      }
      out.x = std::move(xp);
      out.report.complementarity = complementarity_violation(a, rhs, out.x, bounds);
      out.report.residual_norm = (a * out.x - rhs).norm();
      out.report.active_lower = static_cast<int>(std::count(st.begin(), st.end(), NodeState::AtLower));
      out.report.active_upper = static_cast<int>(std::count(st.begin(), st.end(), NodeState::AtUpper));
      out.report.wall_seconds = seconds_since(t0);
      if (out.report.complementarity > tol) {
        std::ostringstream msg;
        msg << "active set settled but complementarity violation " << out.report.complementarity
            << " exceeds tolerance " << tol;
        throw SolverError(msg.str());
      }
      return out;
    }
    // A repeated active set means the full exchange is cycling; from then on
    // only the most violated multiplier is released per iteration.
    if (!seen.insert(st).second) cautious = true;
    st = std::move(next);
  }
  std::ostringstream msg;
  msg << "active-set iteration did not converge in " << options.max_outer << " outer iterations (lower "
      << std::count(st.begin(), st.end(), NodeState::AtLower) << ", upper "
      << std::count(st.begin(), st.end(), NodeState::AtUpper) << ", free "
      << std::count(st.begin(), st.end(), NodeState::Free) << ")";
  throw SolverError(msg.str());
}

std::pair<double, double> min_max_nodal(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

TransportSolution solve_transport(std::shared_ptr<const FeSpace> space,
                                  std::shared_ptr<const TransportProblem> problem, SolverKind kind,
                                  const ViOptions& options) {
  TransportSolution out;
  out.coeffs = make_coefficients(*space, problem);
  const LinearSystem sys = assemble_system(*space, out.coeffs);
  const double hi = problem->source ? std::numeric_limits<double>::infinity() : problem->inflow.sup;
  out.bounds = BoundSet::uniform(static_cast<std::size_t>(space->num_nodes()), 0.0, hi);
  LinearSolution sol =
      kind == SolverKind::Vi ? solve_vi(sys.matrix, sys.rhs, out.bounds, options) : solve_supg(sys.matrix, sys.rhs);
  out.report = std::move(sol.report);
  out.fluence = NodalField(std::move(space), std::vector<double>(sol.x.data(), sol.x.data() + sol.x.size()));
  return out;
}

const char* to_string(SolverKind kind) { return kind == SolverKind::Vi ? "vi" : "supg"; }

}  // namespace protonfem
