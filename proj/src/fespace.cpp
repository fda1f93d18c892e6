#include "protonfem/fespace.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "protonfem/error.hpp"

namespace protonfem {

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
  const int d = mesh_->dim();
  const auto& loc = mesh_->locator();
  geometry_.resize(mesh_->num_cells());
  for (int c = 0; c < num_cells(); ++c) {
    CellGeometry& g = geometry_[c];
    g.volume = mesh_->cell_volume(c);
    g.diameter = mesh_->cell_diameter(c);
    // Barycentric coordinates are affine: their gradients follow from unit
    // offsets along each axis.
    const Point& o = mesh_->vertex(mesh_->cell(c)[0]);
    const auto l0 = loc.barycentric(c, o);
    for (int k = 0; k < d; ++k) {
      Point shifted = o;
      shifted[k] += 1.0;
      const auto l1 = loc.barycentric(c, shifted);
      for (int i = 0; i <= d; ++i) g.grad[i][k] = l1[i] - l0[i];
    }
  }
}

Point FeSpace::map_to_physical(int c, const std::array<double, 4>& bary) const {
  Point x{};
  const auto& cell = mesh_->cell(c);
  for (int i = 0; i <= dim(); ++i) {
    const Point& v = mesh_->vertex(cell[i]);
    for (int k = 0; k < 3; ++k) x[k] += bary[i] * v[k];
  }
  return x;
}

NodalField::NodalField(std::shared_ptr<const FeSpace> s, std::vector<double> c)
    : space(std::move(s)), coefficients(std::move(c)) {
  if (static_cast<int>(coefficients.size()) != space->num_nodes()) {
    throw DomainError("nodal field length does not match the space");
  }
}

NodalField interpolate(std::shared_ptr<const FeSpace> space, const ScalarFunction& f) {
  std::vector<double> c(space->num_nodes());
  for (int i = 0; i < space->num_nodes(); ++i) {
    c[i] = f(space->node(i));
    if (!std::isfinite(c[i])) {
      std::ostringstream msg;
      msg << "interpolate: non-finite value at node " << i;
      throw DomainError(msg.str());
    }
  }
  return NodalField(std::move(space), std::move(c));
}

double value_in_cell(const NodalField& field, int c, const std::array<double, 4>& bary) {
  const auto& nodes = field.space->cell_nodes(c);
  double v = 0.0;
  for (int i = 0; i <= field.space->dim(); ++i) v += bary[i] * field.coefficients[nodes[i]];
  return v;
}

Point gradient_in_cell(const NodalField& field, int c) {
  const auto& g = field.space->geometry(c);
  const auto& nodes = field.space->cell_nodes(c);
  Point grad{};
  for (int i = 0; i <= field.space->dim(); ++i) {
    for (int k = 0; k < 3; ++k) grad[k] += field.coefficients[nodes[i]] * g.grad[i][k];
  }
  return grad;
}

double evaluate(const NodalField& field, const Point& point) {
  const auto loc = locate_point(field.space->mesh(), point);
  return value_in_cell(field, loc.cell, loc.barycentric);
}

void write_nodal_csv(std::ostream& os, const NodalField& field) {
  const int d = field.space->dim();
  os << std::setprecision(17);
  for (int i = 0; i < field.space->num_nodes(); ++i) {
    const Point& x = field.space->node(i);
    for (int k = 0; k < d; ++k) os << x[k] << ',';
    os << field.coefficients[i] << '\n';
  }
}

}  // namespace protonfem
