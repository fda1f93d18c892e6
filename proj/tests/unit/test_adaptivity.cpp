#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "protonfem/adaptivity.hpp"
#include "protonfem/error.hpp"

using namespace protonfem;

namespace {

Domain column() {
  Domain d;
  d.spatial_dim = 2;
  d.spatial_extent = {{-1.0, 1.0}, {0.0, 1.0}};
  d.energy = {5.0, 10.0};
  d.omega = {0.0, 1.0};
  return d;
}

Domain slab() {
  Domain d;
  d.spatial_dim = 1;
  d.spatial_extent = {{0.0, 1.0}};
  d.energy = {5.0, 10.0};
  d.omega = {1.0};
  return d;
}

double linear(const Point& x) { return 1.0 + 0.4 * x[0] - 0.2 * x[1] + 0.01 * x[2]; }

// Source and inflow chosen so that `linear` (in 3D mesh coordinates) is the exact solution.
std::shared_ptr<TransportProblem> manufactured_column(double eps) {
  auto prob = std::make_shared<TransportProblem>();
  prob->domain = column();
  prob->scatter = ScatterModel::from_epsilon(eps);
  const BraggKleeman m = material_preset("water");
  prob->source = [m](const Point& x) {
    return -0.2 - stopping_power_derivative(m, x[2]) * linear(x) - stopping_power(m, x[2]) * 0.01;
  };
  prob->inflow.g = linear;
  prob->inflow.sup = 2.0;
  return prob;
}

std::shared_ptr<TransportProblem> decaying_slab() {
  auto prob = std::make_shared<TransportProblem>();
  prob->domain = slab();
  prob->inflow.g = [](const Point& x) { return x[0] == 0.0 ? std::exp(-std::pow(x[1] - 9.0, 2)) : 0.0; };
  prob->inflow.sup = 1.0;
  return prob;
}

}  // namespace

TEST_CASE("maximum marking") {
  IndicatorField ind;
  ind.eta = {4.0, 2.0, 1.0, 0.03};
  ind.max = 4.0;
  CHECK(mark(ind, 0.01) == std::vector<int>{0, 1, 2});
  CHECK(mark(ind, 1.0) == std::vector<int>{0});
  CHECK(ind.total() == doctest::Approx(std::sqrt(16.0 + 4.0 + 1.0 + 0.0009)));
  CHECK_THROWS_AS(mark(ind, 0.0), ConfigError);
  CHECK_THROWS_AS(mark(ind, 1.5), ConfigError);
}

TEST_CASE("marked set shrinks as theta grows") {
  IndicatorField ind;
  for (int i = 0; i < 50; ++i) ind.eta.push_back(std::abs(std::sin(1.7 * i)));
  ind.max = *std::max_element(ind.eta.begin(), ind.eta.end());
  std::size_t previous = ind.eta.size() + 1;
  for (double theta : {0.01, 0.1, 0.3, 0.6, 0.9, 1.0}) {
    const auto m = mark(ind, theta);
    CHECK(m.size() <= previous);
    previous = m.size();
  }
}

TEST_CASE("zero data gives zero indicators") {
  Domain d = column();
  const int res[] = {2, 2, 2};
  auto space = std::make_shared<const FeSpace>(std::make_shared<const Mesh>(build_structured(d, res)));
  auto prob = std::make_shared<TransportProblem>();
  prob->domain = d;
  prob->scatter = ScatterModel::from_epsilon(0.05);
  const TransportCoefficients co = make_coefficients(*space, prob);
  const NodalField zero(space, std::vector<double>(space->num_nodes(), 0.0));
  const IndicatorField ind = estimate(*space, co, zero);
  CHECK(ind.max == 0.0);
  CHECK(ind.total() == 0.0);
}

TEST_CASE("exact linear solutions have no residual and no jumps") {
  const int res[] = {2, 2, 3};
  auto space = std::make_shared<const FeSpace>(std::make_shared<const Mesh>(build_structured(column(), res)));
  const auto prob = manufactured_column(0.05);
  const TransportCoefficients co = make_coefficients(*space, prob);
  const NodalField u = interpolate(space, linear);
  const IndicatorField ind = estimate(*space, co, u);
  CHECK(ind.max < 1e-10);
}

TEST_CASE("gradient jumps across the beam axis are detected") {
  const int res[] = {4, 2, 2};
  auto space = std::make_shared<const FeSpace>(std::make_shared<const Mesh>(build_structured(column(), res)));
  auto prob = std::make_shared<TransportProblem>();
  prob->domain = column();
  prob->scatter = ScatterModel::from_epsilon(0.05);
  const TransportCoefficients co = make_coefficients(*space, prob);
  // |x0| kinks along x0 = 0; the residual part is the same for eps = 0.
  const NodalField kink = interpolate(space, [](const Point& x) { return std::abs(x[0]); });
  const IndicatorField with_jumps = estimate(*space, co, kink);
  prob->scatter = ScatterModel::from_epsilon(0.0);
  const TransportCoefficients co0 = make_coefficients(*space, prob);
  const IndicatorField no_jumps = estimate(*space, co0, kink);
  int touched = 0;
  for (int c = 0; c < space->num_cells(); ++c) {
    const double extra = with_jumps.eta[c] * with_jumps.eta[c] - no_jumps.eta[c] * no_jumps.eta[c];
    CHECK(extra >= -1e-12);
    if (extra > 1e-12) {
      ++touched;
      bool at_axis = false;
      for (int i = 0; i < 4; ++i) at_axis = at_axis || space->node(space->cell_nodes(c)[i])[0] == 0.0;
      CHECK(at_axis);
    }
  }
  CHECK(touched > 0);
}

TEST_CASE("adaptive loop bookkeeping") {
  const int res[] = {8, 8};
  auto mesh = std::make_shared<const Mesh>(build_structured(slab(), res));
  AdaptOptions opts;
  opts.max_levels = 0;
  const AdaptResult once = adapt_loop(decaying_slab(), mesh, opts);
  REQUIRE(once.report.levels.size() == 1);
  CHECK(once.report.levels[0].dofs == 81);
  CHECK(!once.report.levels[0].energy_error);

  opts.max_levels = 2;
  opts.oracle = [](const TransportSolution& s) { return static_cast<double>(s.fluence.space->num_nodes()); };
  const AdaptResult three = adapt_loop(decaying_slab(), mesh, opts);
  REQUIRE(three.report.levels.size() == 3);
  for (std::size_t i = 1; i < 3; ++i) {
    CHECK(three.report.levels[i].level == static_cast<int>(i));
    CHECK(three.report.levels[i].dofs > three.report.levels[i - 1].dofs);
    CHECK(*three.report.levels[i].energy_error == three.report.levels[i].dofs);
  }
  CHECK(count_hanging_nodes(three.space->mesh()) == 0);
  CHECK(three.solution.fluence.space->num_nodes() == three.report.levels.back().dofs);

  // Target reached at level 0 stops immediately.
  opts.target_error = 1e9;
  CHECK(adapt_loop(decaying_slab(), mesh, opts).report.levels.size() == 1);
}

TEST_CASE("adapt report CSV") {
  AdaptReport r;
  r.levels.push_back({0, 10, 3, 1.5, std::nullopt});
  r.levels.push_back({1, 20, 0, 0.5, 0.25});
  std::ostringstream os;
  write_adapt_csv(os, r);
  CHECK(os.str() == "level,dofs,marked,eta_sum,energy_error\n0,10,3,1.5,\n1,20,0,0.5,0.25\n");
}
