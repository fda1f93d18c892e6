#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "protonfem/mesh.hpp"
#include "protonfem/quadrature.hpp"

namespace protonfem {

/// Affine data of one simplex: barycentric-basis gradients are constant.
struct CellGeometry {
  double volume = 0.0;
  double diameter = 0.0;
  std::array<Point, 4> grad{};  // grad of lambda_i in mesh coordinates
};

/// Continuous P1 Lagrange space; nodes are the mesh vertices.
class FeSpace {
 public:
  explicit FeSpace(std::shared_ptr<const Mesh> mesh);

  [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
  [[nodiscard]] const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  [[nodiscard]] int dim() const { return mesh_->dim(); }
  [[nodiscard]] int num_nodes() const { return static_cast<int>(mesh_->num_vertices()); }
  [[nodiscard]] int num_cells() const { return static_cast<int>(mesh_->num_cells()); }
  [[nodiscard]] int nodes_per_cell() const { return dim() + 1; }
  [[nodiscard]] const std::array<int, 4>& cell_nodes(int c) const { return mesh_->cell(c); }
  [[nodiscard]] const CellGeometry& geometry(int c) const { return geometry_[c]; }
  [[nodiscard]] const Point& node(int i) const { return mesh_->vertex(i); }

  /// Physical coordinates of a barycentric point in cell c.
  [[nodiscard]] Point map_to_physical(int c, const std::array<double, 4>& bary) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<CellGeometry> geometry_;
};

/// Nodal coefficient vector over a space.
struct NodalField {
  std::shared_ptr<const FeSpace> space;
  std::vector<double> coefficients;

  NodalField() = default;
  NodalField(std::shared_ptr<const FeSpace> s, std::vector<double> c);
};

using ScalarFunction = std::function<double(const Point&)>;

/// coefficients[i] = f(x_i). Throws DomainError naming the node on a non-finite value.
NodalField interpolate(std::shared_ptr<const FeSpace> space, const ScalarFunction& f);

/// Field value at a point (barycentric combination in the containing cell).
double evaluate(const NodalField& field, const Point& point);

/// Field value and gradient in cell c at barycentric point.
double value_in_cell(const NodalField& field, int c, const std::array<double, 4>& bary);
Point gradient_in_cell(const NodalField& field, int c);

/// CSV rows `x_0,...,x_{d-1},value`, node order.
void write_nodal_csv(std::ostream& os, const NodalField& field);

}  // namespace protonfem
