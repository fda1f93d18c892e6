#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "protonfem/error.hpp"
#include "protonfem/solvers.hpp"

using namespace protonfem;

namespace {

SparseMatrix dense_to_sparse(const Eigen::MatrixXd& d) { return d.sparseView(); }

// Projected Gauss-Seidel for the box-constrained problem.
Vector projected_gauss_seidel(const Eigen::MatrixXd& a, const Vector& b, const BoundSet& box) {
  Vector x = Vector::Zero(b.size());
  for (int sweep = 0; sweep < 10000; ++sweep) {
    double change = 0.0;
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      const double ri = b[i] - a.row(i).dot(x) + a(i, i) * x[i];
      const double xi = std::clamp(ri / a(i, i), box.lower[i], box.upper[i]);
      change = std::max(change, std::abs(xi - x[i]));
      x[i] = xi;
    }
    if (change < 1e-15) break;
  }
  return x;
}

}  // namespace

TEST_CASE("direct solve") {
  Eigen::MatrixXd a(2, 2);
  a << 4, 1, 2, 3;
  Vector b(2);
  b << 1, 2;
  const LinearSolution s = solve_supg(dense_to_sparse(a), b);
  CHECK(s.x[0] == doctest::Approx(0.1));
  CHECK(s.x[1] == doctest::Approx(0.6));
  CHECK(s.report.method == "sparse-lu");

  const SparseMatrix id = dense_to_sparse(Eigen::MatrixXd::Identity(5, 5));
  const Vector v = Vector::LinSpaced(5, -2, 2);
  CHECK((solve_supg(id, v).x - v).norm() == 0.0);
}

TEST_CASE("singular systems are reported") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  CHECK_THROWS_AS(solve_supg(dense_to_sparse(a), Vector::Ones(2)), SolverError);
}

TEST_CASE("variational inequality with inactive bounds matches the linear solve") {
  Eigen::MatrixXd a(3, 3);
  a << 4, -1, 0, -1, 4, -1, 0, -1, 4;
  Vector b(3);
  b << 1, 2, 3;
  BoundSet box = BoundSet::uniform(3, 0.0, 10.0);
  const LinearSolution vi = solve_vi(dense_to_sparse(a), b, box);
  const LinearSolution lu = solve_supg(dense_to_sparse(a), b);
  CHECK((vi.x - lu.x).norm() < 1e-12);
  CHECK(vi.report.active_lower == 0);
  CHECK(vi.report.active_upper == 0);
}

TEST_CASE("single clamped node") {
  Eigen::MatrixXd a(2, 2);
  a << 2, -1, -1, 2;
  Vector b(2);
  b << -1, 1;
  BoundSet box = BoundSet::uniform(2, 0.0);
  const LinearSolution s = solve_vi(dense_to_sparse(a), b, box);
  CHECK(s.x[0] == 0.0);
  CHECK(s.x[1] == doctest::Approx(0.5));
  CHECK(box.state[0] == NodeState::AtLower);
  CHECK(box.state[1] == NodeState::Free);
  CHECK(s.report.active_lower == 1);
}

TEST_CASE("upper bound activates") {
  Eigen::MatrixXd a(2, 2);
  a << 2, -1, -1, 2;
  Vector b(2);
  b << 4, 0;
  BoundSet box = BoundSet::uniform(2, 0.0, 1.0);
  const LinearSolution s = solve_vi(dense_to_sparse(a), b, box);
  CHECK(s.x[0] == 1.0);
  CHECK(s.x[1] == doctest::Approx(0.5));
  CHECK(box.state[0] == NodeState::AtUpper);
}

TEST_CASE("random diagonally dominant problems match projected Gauss-Seidel") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 20;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      double off = 0.0;
      for (int j = 0; j < n; ++j) {
        if (i != j && u(rng) > 0.4) {
          a(i, j) = u(rng);
          off += std::abs(a(i, j));
        }
      }
      a(i, i) = off + 0.5 + std::abs(u(rng));
    }
    Vector b(n);
    for (int i = 0; i < n; ++i) b[i] = 3.0 * u(rng);
    BoundSet box = BoundSet::uniform(n, 0.0, trial % 2 ? 0.4 : std::numeric_limits<double>::infinity());
    const Vector oracle = projected_gauss_seidel(a, b, box);
    const LinearSolution s = solve_vi(dense_to_sparse(a), b, box);
    CHECK((s.x - oracle).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(complementarity_violation(dense_to_sparse(a), b, s.x, box) <= s.report.tolerance);
    CHECK(s.x.minCoeff() >= 0.0);
  }
}

TEST_CASE("complementarity measure") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  Vector b(2);
  b << 1, -1;
  const BoundSet box = BoundSet::uniform(2, 0.0);
  Vector x(2);
  x << 1, 0;
  CHECK(complementarity_violation(dense_to_sparse(a), b, x, box) == 0.0);
  x << 0.5, 0;
  CHECK(complementarity_violation(dense_to_sparse(a), b, x, box) == doctest::Approx(0.5));
}

TEST_CASE("bound sets are validated") {
  BoundSet box = BoundSet::uniform(3, 0.0, 1.0);
  box.lower[1] = 2.0;
  CHECK_THROWS_AS(box.validate(), ConfigError);
  BoundSet small = BoundSet::uniform(2, 0.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS(solve_vi(dense_to_sparse(a), Vector::Ones(3), small));
}

TEST_CASE("nodal extremes") {
  const std::vector<double> v{3.0, -1.0, 2.0};
  const auto [lo, hi] = min_max_nodal(v);
  CHECK(lo == -1.0);
  CHECK(hi == 3.0);
}
