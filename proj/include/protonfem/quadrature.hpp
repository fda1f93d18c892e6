#pragma once

#include <array>
#include <vector>

namespace protonfem {

/// Quadrature rule on the reference simplex of dimension `dim` (0..3).
///
/// Points are stored as barycentric coordinates (lambda_0, ..., lambda_dim);
/// unused trailing entries are zero. Weights sum to the reference volume 1/dim!.
struct QuadratureRule {
  int dim = 0;
  int degree = 0;
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
};

/// Highest polynomial degree quadrature_for() accepts.
inline constexpr int kMaxQuadratureDegree = 21;

/// Collapsed-coordinate (conical product) Gauss–Jacobi rule exact for
/// polynomials of total degree `degree` on the reference simplex.
/// Throws UnsupportedError for degree < 0 or degree > kMaxQuadratureDegree.
QuadratureRule quadrature_for(int degree, int dim);

/// Gauss–Jacobi nodes/weights on [0,1] for the weight (1-t)^a.
void gauss_jacobi_unit(int n, int a, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace protonfem
