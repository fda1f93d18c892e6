#include "protonfem/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "protonfem/error.hpp"

namespace protonfem {

// Golub–Welsch on the Jacobi matrix of the weight (1-x)^a on [-1,1], mapped to [0,1].
void gauss_jacobi_unit(int n, int a, std::vector<double>& nodes, std::vector<double>& weights) {
  const double alpha = a;
  const double beta = 0.0;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + alpha + beta;
    jacobi(k, k) = (k == 0) ? (beta - alpha) / (alpha + beta + 2.0)
                            : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1;
      const double t = 2.0 * m + alpha + beta;
      const double b = 4.0 * m * (m + alpha) * (m + beta) * (m + alpha + beta) /
                       (t * t * (t + 1.0) * (t - 1.0));
      jacobi(k, k + 1) = jacobi(k + 1, k) = std::sqrt(b);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  const double mu0 = std::pow(2.0, alpha + beta + 1.0) * std::tgamma(alpha + 1.0) *
                     std::tgamma(beta + 1.0) / std::tgamma(alpha + beta + 2.0);
  nodes.resize(n);
  weights.resize(n);
  const double scale = std::pow(2.0, -(alpha + 1.0));
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    nodes[i] = 0.5 * (1.0 + eig.eigenvalues()(i));
    weights[i] = mu0 * v0 * v0 * scale;
  }
}

QuadratureRule quadrature_for(int degree, int dim) {
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    throw UnsupportedError("quadrature degree " + std::to_string(degree) + " not supported (max " +
                           std::to_string(kMaxQuadratureDegree) + ")");
  }
  if (dim < 0 || dim > 3) {
    throw UnsupportedError("quadrature on simplex of dimension " + std::to_string(dim));
  }
  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;
  if (dim == 0) {
    rule.points.push_back({1.0, 0.0, 0.0, 0.0});
    rule.weights.push_back(1.0);
    return rule;
  }
  const int n = std::max(1, (degree + 2) / 2);
  std::vector<double> t0, w0, t1, w1, t2, w2;
  gauss_jacobi_unit(n, dim - 1, t0, w0);
  if (dim >= 2) gauss_jacobi_unit(n, dim - 2, t1, w1);
  if (dim >= 3) gauss_jacobi_unit(n, 0, t2, w2);

  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      rule.points.push_back({1.0 - t0[i], t0[i], 0.0, 0.0});
      rule.weights.push_back(w0[i]);
    }
  } else if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = t0[i];
        const double y = t1[j] * (1.0 - t0[i]);
        rule.points.push_back({1.0 - x - y, x, y, 0.0});
        rule.weights.push_back(w0[i] * w1[j]);
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const double x = t0[i];
          const double y = t1[j] * (1.0 - t0[i]);
          const double z = t2[k] * (1.0 - t0[i]) * (1.0 - t1[j]);
          rule.points.push_back({1.0 - x - y - z, x, y, z});
          rule.weights.push_back(w0[i] * w1[j] * w2[k]);
        }
      }
    }
  }
  return rule;
}

}  // namespace protonfem
