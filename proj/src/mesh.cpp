#include "protonfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "protonfem/error.hpp"

namespace protonfem {

namespace {

// Local facets of a simplex: facet i omits vertex i.
std::array<int, 3> facet_of(const std::array<int, 4>& cell, int dim, int omit) {
  std::array<int, 3> f{-1, -1, -1};
  int k = 0;
  for (int i = 0; i <= dim; ++i) {
    if (i != omit) f[k++] = cell[i];
  }
  return f;
}

std::array<int, 3> sorted_key(std::array<int, 3> f, int n) {
  std::sort(f.begin(), f.begin() + n);
  return f;
}

double det3(const std::array<double, 9>& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

// Row-major Jacobian with columns v_i - v_0.
std::array<double, 9> jacobian(const std::vector<Point>& v, const std::array<int, 4>& cell,
                               int dim) {
  std::array<double, 9> j{};
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      j[r * dim + c] = v[cell[c + 1]][r] - v[cell[0]][r];
    }
  }
  return j;
}

double signed_volume(const std::vector<Point>& v, const std::array<int, 4>& cell, int dim) {
  const auto j = jacobian(v, cell, dim);
  switch (dim) {
    case 1:
      return j[0];
    case 2:
      return 0.5 * (j[0] * j[3] - j[1] * j[2]);
    default:
      return det3(j) / 6.0;
  }
}

std::array<double, 9> invert(const std::array<double, 9>& j, int dim) {
  std::array<double, 9> inv{};
  if (dim == 1) {
    inv[0] = 1.0 / j[0];
  } else if (dim == 2) {
    const double d = j[0] * j[3] - j[1] * j[2];
    inv[0] = j[3] / d;
    inv[1] = -j[1] / d;
    inv[2] = -j[2] / d;
    inv[3] = j[0] / d;
  } else {
    const double d = det3(j);
    inv[0] = (j[4] * j[8] - j[5] * j[7]) / d;
    inv[1] = (j[2] * j[7] - j[1] * j[8]) / d;
    inv[2] = (j[1] * j[5] - j[2] * j[4]) / d;
    inv[3] = (j[5] * j[6] - j[3] * j[8]) / d;
    inv[4] = (j[0] * j[8] - j[2] * j[6]) / d;
    inv[5] = (j[2] * j[3] - j[0] * j[5]) / d;
    inv[6] = (j[3] * j[7] - j[4] * j[6]) / d;
    inv[7] = (j[1] * j[6] - j[0] * j[7]) / d;
    inv[8] = (j[0] * j[4] - j[1] * j[3]) / d;
  }
  return inv;
}

Point midpoint(const Point& a, const Point& b) {
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

FacetTag classify(const Domain& domain, const Point& normal, double tol) {
  const int sd = domain.spatial_dim;
  double wx = 0.0;
  for (int k = 0; k < sd; ++k) wx += domain.omega[k] * normal[k];
  const double ne = normal[sd];
  if (wx < -tol || std::abs(ne - 1.0) <= tol) return FacetTag::Inflow;
  if (wx > tol || std::abs(ne + 1.0) <= tol) return FacetTag::Outflow;
  return FacetTag::Transverse;
}

std::vector<double> axis_coordinates(const Interval& range, int n, const std::vector<double>& breaks) {
  std::vector<double> stops{range.lo};
  for (double b : breaks) {
    if (b > range.lo && b < range.hi) stops.push_back(b);
  }
  stops.push_back(range.hi);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  std::vector<double> coords{range.lo};
  for (std::size_t s = 0; s + 1 < stops.size(); ++s) {
    const double a = stops[s];
    const double b = stops[s + 1];
    const int ns = std::max(1, static_cast<int>(std::lround(n * (b - a) / range.length())));
    for (int i = 1; i <= ns; ++i) {
      coords.push_back(i == ns ? b : a + (b - a) * static_cast<double>(i) / ns);
    }
  }
  return coords;
}

Mesh grid_mesh(const std::vector<std::vector<double>>& axes, std::optional<Domain> domain) {
  const int dim = static_cast<int>(axes.size());
  std::array<int, 3> nv{1, 1, 1};
  for (int a = 0; a < dim; ++a) nv[a] = static_cast<int>(axes[a].size());
  auto vid = [&](int i, int j, int k) { return i + nv[0] * (j + nv[1] * k); };

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(nv[0]) * nv[1] * nv[2]);
  for (int k = 0; k < nv[2]; ++k) {
    for (int j = 0; j < nv[1]; ++j) {
      for (int i = 0; i < nv[0]; ++i) {
        Point p{};
        p[0] = axes[0][i];
        if (dim > 1) p[1] = axes[1][j];
        if (dim > 2) p[2] = axes[2][k];
        vertices.push_back(p);
      }
    }
  }

  std::vector<std::array<int, 4>> cells;
  if (dim == 1) {
    for (int i = 0; i + 1 < nv[0]; ++i) cells.push_back({i, i + 1, -1, -1});
  } else if (dim == 2) {
    for (int j = 0; j + 1 < nv[1]; ++j) {
      for (int i = 0; i + 1 < nv[0]; ++i) {
        const int v00 = vid(i, j, 0), v10 = vid(i + 1, j, 0);
        const int v01 = vid(i, j + 1, 0), v11 = vid(i + 1, j + 1, 0);
        cells.push_back({v00, v10, v11, -1});
        cells.push_back({v00, v11, v01, -1});
      }
    }
  } else {
    static constexpr std::array<std::array<int, 3>, 6> perms{
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (int k = 0; k + 1 < nv[2]; ++k) {
      for (int j = 0; j + 1 < nv[1]; ++j) {
        for (int i = 0; i + 1 < nv[0]; ++i) {
          for (const auto& perm : perms) {
            std::array<int, 3> idx{i, j, k};
            std::array<int, 4> tet{};
            tet[0] = vid(idx[0], idx[1], idx[2]);
            for (int s = 0; s < 3; ++s) {
              idx[perm[s]] += 1;
              tet[s + 1] = vid(idx[0], idx[1], idx[2]);
            }
            cells.push_back(tet);
          }
        }
      }
    }
  }
  return Mesh(dim, std::move(vertices), std::move(cells), std::move(domain));
}

}  // namespace

const char* to_string(FacetTag tag) {
  switch (tag) {
    case FacetTag::Inflow:
      return "inflow";
    case FacetTag::Outflow:
      return "outflow";
    case FacetTag::Transverse:
      return "transverse";
  }
  return "unknown";
}

double Domain::diameter() const {
  double s = energy.length() * energy.length();
  for (const auto& iv : spatial_extent) s += iv.length() * iv.length();
  return std::sqrt(s);
}

void Domain::validate() const {
  if (spatial_dim != 1 && spatial_dim != 2) {
    throw ConfigError("domain: spatial_dim must be 1 or 2, got " + std::to_string(spatial_dim));
  }
  if (static_cast<int>(spatial_extent.size()) != spatial_dim) {
    throw ConfigError("domain: spatial_extent must have spatial_dim intervals");
  }
  for (const auto& iv : spatial_extent) {
    if (!(iv.hi > iv.lo)) throw ConfigError("domain: spatial extent must have positive length");
  }
  if (!(energy.lo > 0.0)) throw ConfigError("domain: E_min must be positive");
  if (!(energy.lo < energy.hi)) throw ConfigError("domain: E_min must be below E_max");
  if (static_cast<int>(omega.size()) != spatial_dim) {
    throw ConfigError("domain: omega must have spatial_dim components");
  }
  double norm2 = 0.0;
  for (double w : omega) norm2 += w * w;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
    throw ConfigError("domain: omega must be a unit vector");
  }
}

Mesh::Mesh(int dim, std::vector<Point> vertices, std::vector<std::array<int, 4>> cells,
           std::optional<Domain> domain)
    : dim_(dim), vertices_(std::move(vertices)), cells_(std::move(cells)), domain_(std::move(domain)) {
  if (dim_ < 1 || dim_ > 3) throw UnsupportedError("mesh dimension must be 1, 2 or 3");
  if (domain_ && domain_->total_dim() != dim_) {
    throw ConfigError("mesh dimension does not match domain total dimension");
  }
  parents_.assign(cells_.size(), -1);
  green_.assign(cells_.size(), GreenInfo{});
  finalize();
}

double Mesh::tag_tolerance() const {
  return domain_ ? 1e-12 * domain_->diameter() : 1e-12;
}

void Mesh::finalize() {
  for (auto& c : cells_) {
    const double v = signed_volume(vertices_, c, dim_);
    if (v == 0.0) throw Error("degenerate cell in mesh");
    if (v < 0.0) std::swap(c[0], c[1]);
  }

  std::map<std::array<int, 3>, int> counts;
  for (const auto& c : cells_) {
    for (int i = 0; i <= dim_; ++i) ++counts[sorted_key(facet_of(c, dim_, i), dim_)];
  }
  boundary_.clear();
  const double tol = tag_tolerance();
  for (std::size_t ci = 0; ci < cells_.size(); ++ci) {
    const auto& c = cells_[ci];
    for (int i = 0; i <= dim_; ++i) {
      const auto f = facet_of(c, dim_, i);
      if (counts[sorted_key(f, dim_)] != 1) continue;
      BoundaryFacet bf;
      bf.vertices = f;
      bf.cell = static_cast<int>(ci);
      const Point& a = vertices_[f[0]];
      const Point& opp = vertices_[c[i]];
      Point n{};
      if (dim_ == 1) {
        n[0] = 1.0;
        bf.measure = 1.0;
      } else if (dim_ == 2) {
        const Point& b = vertices_[f[1]];
        const double tx = b[0] - a[0], ty = b[1] - a[1];
        const double len = std::hypot(tx, ty);
        n = {ty / len, -tx / len, 0.0};
        bf.measure = len;
      } else {
        const Point& b = vertices_[f[1]];
        const Point& cc = vertices_[f[2]];
        const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        const double w[3] = {cc[0] - a[0], cc[1] - a[1], cc[2] - a[2]};
        const double cx = u[1] * w[2] - u[2] * w[1];
        const double cy = u[2] * w[0] - u[0] * w[2];
        const double cz = u[0] * w[1] - u[1] * w[0];
        const double len = std::sqrt(cx * cx + cy * cy + cz * cz);
        n = {cx / len, cy / len, cz / len};
        bf.measure = 0.5 * len;
      }
      double s = 0.0;
      for (int k = 0; k < dim_; ++k) s += n[k] * (opp[k] - a[k]);
      if (s > 0.0) {
        for (auto& x : n) x = -x;
      }
      bf.normal = n;
      bf.tag = domain_ ? classify(*domain_, n, tol) : FacetTag::Transverse;
      boundary_.push_back(bf);
    }
  }
  locator_ = std::make_shared<const CellLocator>(*this);
}

double Mesh::cell_volume(int c) const { return std::abs(signed_volume(vertices_, cells_[c], dim_)); }

double Mesh::cell_diameter(int c) const {
  double h = 0.0;
  const auto& cell = cells_[c];
  for (int i = 0; i <= dim_; ++i) {
    for (int j = i + 1; j <= dim_; ++j) h = std::max(h, distance(vertices_[cell[i]], vertices_[cell[j]]));
  }
  return h;
}

Point Mesh::cell_centroid(int c) const {
  Point p{};
  const auto& cell = cells_[c];
  for (int i = 0; i <= dim_; ++i) {
    for (int k = 0; k < 3; ++k) p[k] += vertices_[cell[i]][k];
  }
  for (auto& x : p) x /= (dim_ + 1);
  return p;
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) v += cell_volume(static_cast<int>(c));
  return v;
}

std::vector<Mesh::InteriorFacet> Mesh::interior_facets() const {
  std::map<std::array<int, 3>, InteriorFacet> facets;
  for (std::size_t ci = 0; ci < cells_.size(); ++ci) {
    for (int i = 0; i <= dim_; ++i) {
      const auto key = sorted_key(facet_of(cells_[ci], dim_, i), dim_);
      auto& f = facets[key];
      f.vertices = key;
      if (f.cell_a < 0) {
        f.cell_a = static_cast<int>(ci);
      } else {
        f.cell_b = static_cast<int>(ci);
      }
    }
  }
  std::vector<InteriorFacet> out;
  for (const auto& [key, f] : facets) {
    if (f.cell_b >= 0) out.push_back(f);
  }
  return out;
}

Mesh build_structured(const Domain& domain, std::span<const int> resolution, const AxisBreaks& breaks) {
  domain.validate();
  const int d = domain.total_dim();
  if (static_cast<int>(resolution.size()) != d) {
    throw ConfigError("mesh: resolution must have one entry per axis (" + std::to_string(d) + ")");
  }
  for (int r : resolution) {
    if (r < 1) throw ConfigError("mesh: resolution must be at least 1 per axis");
  }
  std::vector<std::vector<double>> axes;
  for (int a = 0; a < d; ++a) {
    const Interval range = a < domain.spatial_dim ? domain.spatial_extent[a] : domain.energy;
    const std::vector<double> none;
    axes.push_back(axis_coordinates(range, resolution[a],
                                    a < static_cast<int>(breaks.size()) ? breaks[a] : none));
  }
  return grid_mesh(axes, domain);
}

Mesh build_spatial_grid(std::span<const Interval> extent, std::span<const int> resolution) {
  if (extent.empty() || extent.size() > 2 || extent.size() != resolution.size()) {
    throw ConfigError("spatial grid: need one resolution entry per axis (1 or 2 axes)");
  }
  std::vector<std::vector<double>> axes;
  for (std::size_t a = 0; a < extent.size(); ++a) {
    if (!(extent[a].hi > extent[a].lo)) throw ConfigError("spatial grid: non-positive extent");
    if (resolution[a] < 1) throw ConfigError("spatial grid: resolution must be at least 1");
    axes.push_back(axis_coordinates(extent[a], resolution[a], {}));
  }
  return grid_mesh(axes, std::nullopt);
}

namespace {

struct MidpointTable {
  std::vector<Point>& vertices;
  std::map<std::pair<int, int>, int>& table;

  int get(int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(midpoint(vertices[a], vertices[b]));
    table.emplace(key, id);
    return id;
  }
  [[nodiscard]] bool has(int a, int b) const { return table.count(std::minmax(a, b)) != 0; }
};

struct WorkCell {
  std::array<int, 3> v{};
  bool red = false;
  int group = -1;
  std::array<int, 3> parent{-1, -1, -1};
};

void assign_parents(Mesh& fine, const Mesh& coarse, std::vector<int>& parents) {
  parents.resize(fine.num_cells());
  for (std::size_t c = 0; c < fine.num_cells(); ++c) {
    parents[c] = locate_point(coarse, fine.cell_centroid(static_cast<int>(c))).cell;
  }
}

}  // namespace

Mesh refine(const Mesh& mesh, std::span<const int> marked) {
  const int dim = mesh.dim();
  std::vector<char> is_marked(mesh.num_cells(), 0);
  std::size_t n_marked = 0;
  for (int c : marked) {
    if (c < 0 || static_cast<std::size_t>(c) >= mesh.num_cells()) {
      throw DomainError("refine: marked cell id out of range");
    }
    if (!is_marked[c]) ++n_marked;
    is_marked[c] = 1;
  }
  if (n_marked == 0) return mesh;
  if (dim == 3) {
    if (n_marked != mesh.num_cells()) {
      throw UnsupportedError("refine: adaptive refinement is not supported for 3D meshes");
    }
    return refine_uniform(mesh);
  }

  std::vector<Point> vertices = mesh.vertices();
  std::map<std::pair<int, int>, int> mids = mesh.edge_midpoints();
  MidpointTable table{vertices, mids};

  if (dim == 1) {
    std::vector<std::array<int, 4>> cells;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const auto& cell = mesh.cell(static_cast<int>(c));
      if (is_marked[c]) {
        const int m = table.get(cell[0], cell[1]);
        cells.push_back({cell[0], m, -1, -1});
        cells.push_back({m, cell[1], -1, -1});
      } else {
        cells.push_back(cell);
      }
    }
    Mesh fine(1, std::move(vertices), std::move(cells), mesh.domain());
    fine.midpoints_ = std::move(mids);
    fine.level_ = mesh.level_ + 1;
    assign_parents(fine, mesh, fine.parents_);
    return fine;
  }

  // dim == 2: red refinement of marked cells, green closure, greens are
  // reverted to their parent before any further refinement.
  std::map<int, std::vector<int>> groups;
  int next_group = 0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const int g = mesh.green()[c].group;
    if (g >= 0) {
      groups[g].push_back(static_cast<int>(c));
      next_group = std::max(next_group, g + 1);
    }
  }

  std::vector<WorkCell> work;
  std::set<int> reverted;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(static_cast<int>(c));
    const GreenInfo& gi = mesh.green()[c];
    if (gi.group >= 0) {
      bool any = false;
      for (int s : groups[gi.group]) any = any || is_marked[s];
      if (any) {
        if (reverted.insert(gi.group).second) work.push_back({gi.parent, true, -1, {-1, -1, -1}});
        continue;
      }
    }
    work.push_back({{cell[0], cell[1], cell[2]}, is_marked[c] != 0, gi.group, gi.parent});
  }

  auto red_split = [&](const std::array<int, 3>& v, std::vector<WorkCell>& out) {
    const int ab = table.get(v[0], v[1]);
    const int bc = table.get(v[1], v[2]);
    const int ca = table.get(v[2], v[0]);
    out.push_back({{v[0], ab, ca}});
    out.push_back({{ab, v[1], bc}});
    out.push_back({{ca, bc, v[2]}});
    out.push_back({{ab, bc, ca}});
  };

  bool changed = true;
  while (changed) {
    changed = false;
    std::set<int> revert;
    for (const auto& w : work) {
      if (w.group < 0 || w.red) continue;
      for (int e = 0; e < 3; ++e) {
        if (table.has(w.v[e], w.v[(e + 1) % 3])) revert.insert(w.group);
      }
    }
    std::vector<WorkCell> next;
    next.reserve(work.size() + work.size() / 2);
    std::set<int> emitted;
    for (const auto& w : work) {
      if (w.group >= 0 && revert.count(w.group)) {
        if (emitted.insert(w.group).second) next.push_back({w.parent, true, -1, {-1, -1, -1}});
        changed = true;
        continue;
      }
      if (w.red) {
        red_split(w.v, next);
        changed = true;
        continue;
      }
      if (w.group >= 0) {
        next.push_back(w);
        continue;
      }
      int count = 0;
      int split = -1;
      for (int e = 0; e < 3; ++e) {
        if (table.has(w.v[e], w.v[(e + 1) % 3])) {
          ++count;
          split = e;
        }
      }
      if (count >= 2) {
        red_split(w.v, next);
        changed = true;
      } else if (count == 1) {
        const int a = w.v[split];
        const int b = w.v[(split + 1) % 3];
        const int c = w.v[(split + 2) % 3];
        const int m = table.get(a, b);
        const int g = next_group++;
        next.push_back({{a, m, c}, false, g, w.v});
        next.push_back({{m, b, c}, false, g, w.v});
        changed = true;
      } else {
        next.push_back(w);
      }
    }
    work = std::move(next);
  }

  std::vector<std::array<int, 4>> cells;
  std::vector<GreenInfo> green;
  cells.reserve(work.size());
  for (const auto& w : work) {
    cells.push_back({w.v[0], w.v[1], w.v[2], -1});
    green.push_back({w.group, w.parent});
  }
  Mesh fine(2, std::move(vertices), std::move(cells), mesh.domain());
  fine.green_ = std::move(green);
  fine.midpoints_ = std::move(mids);
  fine.level_ = mesh.level_ + 1;
  assign_parents(fine, mesh, fine.parents_);
  return fine;
}

Mesh refine_uniform(const Mesh& mesh) {
  if (mesh.dim() != 3) {
    std::vector<int> all(mesh.num_cells());
    for (std::size_t c = 0; c < all.size(); ++c) all[c] = static_cast<int>(c);
    return refine(mesh, all);
  }
  std::vector<Point> vertices = mesh.vertices();
  std::map<std::pair<int, int>, int> mids = mesh.edge_midpoints();
  MidpointTable table{vertices, mids};
  std::vector<std::array<int, 4>> cells;
  std::vector<int> parents;
  cells.reserve(8 * mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cell(static_cast<int>(c));
    const int x0 = t[0], x1 = t[1], x2 = t[2], x3 = t[3];
    const int x01 = table.get(x0, x1), x02 = table.get(x0, x2), x03 = table.get(x0, x3);
    const int x12 = table.get(x1, x2), x13 = table.get(x1, x3), x23 = table.get(x2, x3);
    const std::array<std::array<int, 4>, 8> children{{{x0, x01, x02, x03},
                                                      {x01, x1, x12, x13},
                                                      {x02, x12, x2, x23},
                                                      {x03, x13, x23, x3},
                                                      {x01, x02, x03, x13},
                                                      {x01, x02, x12, x13},
                                                      {x02, x03, x13, x23},
                                                      {x02, x12, x13, x23}}};
    for (const auto& ch : children) {
      cells.push_back(ch);
      parents.push_back(static_cast<int>(c));
    }
  }
  Mesh fine(3, std::move(vertices), std::move(cells), mesh.domain());
  fine.parents_ = std::move(parents);
  fine.midpoints_ = std::move(mids);
  fine.level_ = mesh.level_ + 1;
  return fine;
}

CellLocator::CellLocator(const Mesh& mesh) : dim_(mesh.dim()) {
  const auto& v = mesh.vertices();
  lo_ = v.empty() ? Point{} : v.front();
  hi_ = lo_;
  for (const auto& p : v) {
    for (int k = 0; k < dim_; ++k) {
      lo_[k] = std::min(lo_[k], p[k]);
      hi_[k] = std::max(hi_[k], p[k]);
    }
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, mesh.num_cells()));
  const int per_axis = std::max(1, static_cast<int>(std::lround(std::pow(n, 1.0 / dim_))));
  for (int k = 0; k < dim_; ++k) nb_[k] = per_axis;
  std::size_t total = 1;
  for (int k = 0; k < dim_; ++k) total *= nb_[k];
  buckets_.resize(total);

  inverse_.resize(mesh.num_cells());
  origin_.resize(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(static_cast<int>(c));
    inverse_[c] = invert(jacobian(v, cell, dim_), dim_);
    origin_[c] = v[cell[0]];
    std::array<int, 3> b0{0, 0, 0}, b1{0, 0, 0};
    for (int k = 0; k < dim_; ++k) {
      double cmin = v[cell[0]][k], cmax = cmin;
      for (int i = 1; i <= dim_; ++i) {
        cmin = std::min(cmin, v[cell[i]][k]);
        cmax = std::max(cmax, v[cell[i]][k]);
      }
      const double span = hi_[k] - lo_[k];
      const double pad = 1e-9 * span;
      auto index = [&](double x) {
        const int i = static_cast<int>(std::floor((x - lo_[k]) / span * nb_[k]));
        return std::clamp(i, 0, nb_[k] - 1);
      };
      b0[k] = index(cmin - pad);
      b1[k] = index(cmax + pad);
    }
    for (int k2 = b0[2]; k2 <= b1[2]; ++k2) {
      for (int k1 = b0[1]; k1 <= b1[1]; ++k1) {
        for (int k0 = b0[0]; k0 <= b1[0]; ++k0) {
          buckets_[k0 + nb_[0] * (k1 + nb_[1] * k2)].push_back(static_cast<int>(c));
        }
      }
    }
  }
}

std::size_t CellLocator::bucket_of(const Point& p) const {
  std::array<int, 3> b{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    const double span = hi_[k] - lo_[k];
    const int i = static_cast<int>(std::floor((p[k] - lo_[k]) / span * nb_[k]));
    b[k] = std::clamp(i, 0, nb_[k] - 1);
  }
  return static_cast<std::size_t>(b[0] + nb_[0] * (b[1] + nb_[1] * b[2]));
}

std::array<double, 4> CellLocator::barycentric(int c, const Point& point) const {
  std::array<double, 4> lam{};
  const auto& inv = inverse_[c];
  const Point& o = origin_[c];
  double sum = 0.0;
  for (int r = 0; r < dim_; ++r) {
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) s += inv[r * dim_ + k] * (point[k] - o[k]);
    lam[r + 1] = s;
    sum += s;
  }
  lam[0] = 1.0 - sum;
  return lam;
}

std::optional<CellLocation> CellLocator::find(const Point& point) const {
  for (int k = 0; k < dim_; ++k) {
    const double pad = 1e-10 * (hi_[k] - lo_[k]);
    if (point[k] < lo_[k] - pad || point[k] > hi_[k] + pad) return std::nullopt;
  }
  for (int c : buckets_[bucket_of(point)]) {
    const auto lam = barycentric(c, point);
    bool inside = true;
    for (int i = 0; i <= dim_; ++i) inside = inside && lam[i] >= -tol_ * 100.0;
    if (inside) return CellLocation{c, lam};
  }
  return std::nullopt;
}

CellLocation locate_point(const Mesh& mesh, const Point& point) {
  auto loc = mesh.locator().find(point);
  if (!loc) {
    std::ostringstream msg;
    msg << "point (" << point[0];
    for (int k = 1; k < mesh.dim(); ++k) msg << ", " << point[k];
    msg << ") is outside the mesh";
    throw NotFoundError(msg.str());
  }
  return *loc;
}

std::size_t count_hanging_nodes(const Mesh& mesh) {
  std::map<Point, int> by_coord;
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) by_coord.emplace(mesh.vertex(static_cast<int>(i)), static_cast<int>(i));
  std::size_t hanging = 0;
  const int d = mesh.dim();
  for (const auto& cell : mesh.cells()) {
    for (int i = 0; i <= d; ++i) {
      for (int j = i + 1; j <= d; ++j) {
        if (by_coord.count(midpoint(mesh.vertex(cell[i]), mesh.vertex(cell[j])))) ++hanging;
      }
    }
  }
  return hanging;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  const int d = mesh.dim();
  os << d << ' ' << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  os << std::setprecision(17);
  for (const auto& p : mesh.vertices()) {
    os << p[0];
    for (int k = 1; k < d; ++k) os << ' ' << p[k];
    os << '\n';
  }
  for (const auto& c : mesh.cells()) {
    os << c[0];
    for (int k = 1; k <= d; ++k) os << ' ' << c[k];
    os << '\n';
  }
  for (const auto& f : mesh.boundary_facets()) {
    for (int k = 0; k < d; ++k) os << f.vertices[k] << ' ';
    os << to_string(f.tag) << '\n';
  }
}

}  // namespace protonfem
