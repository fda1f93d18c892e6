#include <cmath>

#include "doctest.h"
#include "protonfem/error.hpp"
#include "protonfem/quadrature.hpp"

using namespace protonfem;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Exact integral of prod x_k^{a_k} over the reference simplex: prod a_k! / (sum a_k + d)!.
double monomial_integral(const std::array<int, 3>& a, int dim) {
  double num = 1.0;
  int total = 0;
  for (int k = 0; k < dim; ++k) {
    num *= factorial(a[k]);
    total += a[k];
  }
  return num / factorial(total + dim);
}

double rule_integral(const QuadratureRule& q, const std::array<int, 3>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double v = 1.0;
    // Reference coordinates are barycentric entries 1..dim.
    for (int k = 0; k < q.dim; ++k) v *= std::pow(q.points[i][k + 1], a[k]);
    s += q.weights[i] * v;
  }
  return s;
}

}  // namespace

TEST_CASE("weights sum to the reference volume") {
  for (int dim = 0; dim <= 3; ++dim) {
    for (int deg = 0; deg <= 8; ++deg) {
      const QuadratureRule q = quadrature_for(deg, dim);
      double s = 0.0;
      for (double w : q.weights) s += w;
      CHECK(s == doctest::Approx(1.0 / factorial(dim)).epsilon(1e-14));
    }
  }
}

TEST_CASE("rules integrate monomials up to their degree exactly") {
  for (int dim = 1; dim <= 3; ++dim) {
    for (int deg : {1, 2, 4, 7}) {
      const QuadratureRule q = quadrature_for(deg, dim);
      for (int a = 0; a <= deg; ++a) {
        for (int b = 0; a + b <= deg; ++b) {
          for (int c = 0; a + b + c <= deg; ++c) {
            if ((dim < 2 && b > 0) || (dim < 3 && c > 0)) continue;
            const std::array<int, 3> e{a, b, c};
            CHECK(rule_integral(q, e) == doctest::Approx(monomial_integral(e, dim)).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("barycentric points lie in the simplex") {
  const QuadratureRule q = quadrature_for(6, 3);
  for (const auto& p : q.points) {
    double s = 0.0;
    for (double l : p) {
      CHECK(l >= 0.0);
      s += l;
    }
    CHECK(s == doctest::Approx(1.0));
  }
}

TEST_CASE("point counts of the default rules") {
  CHECK(quadrature_for(4, 2).size() == 9);
  CHECK(quadrature_for(4, 3).size() == 27);
  CHECK(quadrature_for(1, 2).size() == 1);
}

TEST_CASE("unsupported degrees are rejected") {
  CHECK_THROWS_AS(quadrature_for(-1, 2), UnsupportedError);
  CHECK_THROWS_AS(quadrature_for(kMaxQuadratureDegree + 1, 2), UnsupportedError);
  CHECK_THROWS_AS(quadrature_for(2, 4), UnsupportedError);
}

TEST_CASE("Gauss-Jacobi rule on [0,1]") {
  std::vector<double> x, w;
  gauss_jacobi_unit(3, 0, x, w);
  double s5 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s5 += w[i] * std::pow(x[i], 5);
  CHECK(s5 == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  // (1-t)^2 weight: ∫ t (1-t)^2 dt = 1/12
  gauss_jacobi_unit(2, 2, x, w);
  double s1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s1 += w[i] * x[i];
  CHECK(s1 == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}
