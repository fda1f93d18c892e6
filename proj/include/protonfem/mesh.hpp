#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace protonfem {

/// Coordinates in up to three dimensions; unused trailing entries are zero.
using Point = std::array<double, 3>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  [[nodiscard]] double length() const { return hi - lo; }
};

/// Space–energy box Omega_x × [E_min, E_max]. Mesh coordinates are
/// (x_1, ..., x_spatial_dim, E): the energy axis is always the last one.
struct Domain {
  int spatial_dim = 1;
  std::vector<Interval> spatial_extent;  // cm, one per spatial axis
  Interval energy{1.0, 70.0};            // MeV
  std::vector<double> omega{1.0};        // unit beam direction

  [[nodiscard]] int total_dim() const { return spatial_dim + 1; }
  [[nodiscard]] double diameter() const;
  /// Throws ConfigError describing the first violated invariant.
  void validate() const;
};

enum class FacetTag { Inflow, Outflow, Transverse };

const char* to_string(FacetTag tag);

struct BoundaryFacet {
  std::array<int, 3> vertices{-1, -1, -1};  // `dim` entries used
  int cell = -1;
  Point normal{};  // outward unit normal
  double measure = 0.0;
  FacetTag tag = FacetTag::Transverse;
};

/// Green-closure bookkeeping for a 2D cell produced by bisection.
struct GreenInfo {
  int group = -1;  // shared by the two siblings; -1 for non-green cells
  std::array<int, 3> parent{-1, -1, -1};
};

class CellLocator;

/// Immutable conforming simplicial mesh of dimension 1, 2 or 3.
///
/// Meshes of a space–energy domain carry the Domain and tagged boundary
/// facets; plain spatial meshes (dose grids) leave every facet Transverse.
class Mesh {
 public:
  Mesh(int dim, std::vector<Point> vertices, std::vector<std::array<int, 4>> cells,
       std::optional<Domain> domain = std::nullopt);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t num_vertices() const { return vertices_.size(); }
  [[nodiscard]] std::size_t num_cells() const { return cells_.size(); }
  [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
  [[nodiscard]] const Point& vertex(int i) const { return vertices_[i]; }
  [[nodiscard]] const std::vector<std::array<int, 4>>& cells() const { return cells_; }
  [[nodiscard]] const std::array<int, 4>& cell(int c) const { return cells_[c]; }
  [[nodiscard]] const std::vector<BoundaryFacet>& boundary_facets() const { return boundary_; }
  [[nodiscard]] const std::optional<Domain>& domain() const { return domain_; }

  [[nodiscard]] double cell_volume(int c) const;
  [[nodiscard]] double cell_diameter(int c) const;
  [[nodiscard]] Point cell_centroid(int c) const;
  [[nodiscard]] double total_volume() const;

  /// Interior facets as (facet vertices, cell a, cell b).
  struct InteriorFacet {
    std::array<int, 3> vertices{-1, -1, -1};
    int cell_a = -1;
    int cell_b = -1;
  };
  [[nodiscard]] std::vector<InteriorFacet> interior_facets() const;

  /// Parent cell index in the mesh this one was refined from (-1 for a root mesh).
  [[nodiscard]] const std::vector<int>& parents() const { return parents_; }
  [[nodiscard]] const std::vector<GreenInfo>& green() const { return green_; }
  [[nodiscard]] const std::map<std::pair<int, int>, int>& edge_midpoints() const {
    return midpoints_;
  }
  [[nodiscard]] int refinement_level() const { return level_; }

  [[nodiscard]] const CellLocator& locator() const { return *locator_; }

  /// Classification tolerance for facet tags.
  [[nodiscard]] double tag_tolerance() const;

 private:
  friend Mesh refine(const Mesh&, std::span<const int>);
  friend Mesh refine_uniform(const Mesh&);

  void finalize();

  int dim_;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 4>> cells_;
  std::optional<Domain> domain_;
  std::vector<BoundaryFacet> boundary_;
  std::vector<int> parents_;
  std::vector<GreenInfo> green_;
  std::map<std::pair<int, int>, int> midpoints_;
  int level_ = 0;
  std::shared_ptr<const CellLocator> locator_;
};

/// Grid lines forced into a structured mesh along one axis (e.g. layer interfaces).
using AxisBreaks = std::vector<std::vector<double>>;

/// Structured simplicial mesh of the domain box. `resolution` holds one cell
/// count per mesh axis (spatial axes then energy). Each grid cell is split into
/// 2 triangles (d_tot = 2) or 6 Kuhn tetrahedra (d_tot = 3). When `breaks`
/// lists interior coordinates for an axis, grid lines are snapped onto them and
/// the axis cell count is distributed over the segments (at least one each).
Mesh build_structured(const Domain& domain, std::span<const int> resolution,
                      const AxisBreaks& breaks = {});

/// Uniform simplicial grid over a spatial box (dim 1: intervals, dim 2: triangles).
Mesh build_spatial_grid(std::span<const Interval> extent, std::span<const int> resolution);

/// Red refinement of the marked cells with green closure (dim 2). For dim 1
/// marked intervals are bisected. For dim 3 only marked = all cells is accepted.
Mesh refine(const Mesh& mesh, std::span<const int> marked);

/// Refine every cell (red refinement in 2D, 8-tetrahedra subdivision in 3D).
Mesh refine_uniform(const Mesh& mesh);

struct CellLocation {
  int cell = -1;
  std::array<double, 4> barycentric{};
};

/// Containing cell (lowest id on ties) and barycentric coordinates.
/// Throws NotFoundError when the point is outside the mesh.
CellLocation locate_point(const Mesh& mesh, const Point& point);

/// Bucket-grid point locator built once per mesh.
class CellLocator {
 public:
  explicit CellLocator(const Mesh& mesh);
  [[nodiscard]] std::optional<CellLocation> find(const Point& point) const;
  /// Barycentric coordinates of `point` with respect to cell `c`.
  [[nodiscard]] std::array<double, 4> barycentric(int c, const Point& point) const;

 private:
  [[nodiscard]] std::size_t bucket_of(const Point& p) const;

  int dim_;
  Point lo_{}, hi_{};
  std::array<int, 3> nb_{1, 1, 1};
  std::vector<std::vector<int>> buckets_;
  // Inverse Jacobian (row-major dim x dim) and first vertex per cell.
  std::vector<std::array<double, 9>> inverse_;
  std::vector<Point> origin_;
  double tol_ = 1e-12;
};

/// Conformity audit: number of (cell, edge) pairs whose edge midpoint is a mesh
/// vertex, i.e. hanging nodes. Zero for a conforming mesh.
std::size_t count_hanging_nodes(const Mesh& mesh);

/// Plain-text dump: `d_tot n_vertices n_cells`, vertex lines, cell lines, then
/// boundary facet lines `indices... tag`.
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace protonfem
