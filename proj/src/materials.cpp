#include "protonfem/materials.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "protonfem/error.hpp"

namespace protonfem {

void BraggKleeman::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("material: alpha must be positive");
  if (!(rho > 0.0)) throw ConfigError("material: rho must be positive");
  if (!(p >= 1.0 && p <= 2.0)) throw ConfigError("material: p must lie in [1, 2]");
}

double stopping_power(const BraggKleeman& mat, double energy) {
  if (!(energy > 0.0)) throw DomainError("stopping_power: energy must be positive");
  return std::pow(energy, 1.0 - mat.p) / (mat.alpha * mat.p);
}

double stopping_power_derivative(const BraggKleeman& mat, double energy) {
  if (!(energy > 0.0)) throw DomainError("stopping_power_derivative: energy must be positive");
  return (1.0 - mat.p) / (mat.alpha * mat.p) * std::pow(energy, -mat.p);
}

double dissipation_mu(const BraggKleeman& mat, double e_min) {
  return -stopping_power_derivative(mat, e_min);
}

namespace {
const std::map<std::string, BraggKleeman>& presets() {
  static const std::map<std::string, BraggKleeman> table{
      {"water", {0.00246, 1.75, 1.0}},
      {"muscle", {0.0021, 1.75, 1.0}},
      {"bone", {0.0011, 1.77, 1.0}},
      {"lung", {0.0033, 1.74, 1.0}},
      {"water-bortfeld", {2.2e-3, 1.77, 1.0}},
  };
  return table;
}
}  // namespace

BraggKleeman material_preset(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("unknown material preset '" + name + "'");
  return it->second;
}

std::vector<std::string> material_preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : presets()) names.push_back(k);
  return names;
}

MaterialField::MaterialField(BraggKleeman homogeneous) : single_(homogeneous) { single_.validate(); }

MaterialField::MaterialField(std::vector<Layer> layers, std::vector<double> omega)
    : layers_(std::move(layers)), omega_(std::move(omega)) {
  if (layers_.empty()) throw ConfigError("material: layer list is empty");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].material.validate();
    if (!(layers_[i].depth.hi > layers_[i].depth.lo)) {
      throw ConfigError("material: layer '" + layers_[i].name + "' has empty depth interval");
    }
    if (i > 0 && layers_[i].depth.lo != layers_[i - 1].depth.hi) {
      throw ConfigError("material: layers '" + layers_[i - 1].name + "' and '" + layers_[i].name +
                        "' leave a gap or overlap");
    }
  }
  single_ = layers_.front().material;
}

const BraggKleeman& MaterialField::at_depth(double depth) const {
  if (layers_.empty()) return single_;
  const double tol = 1e-12 * (layers_.back().depth.hi - layers_.front().depth.lo);
  if (depth < layers_.front().depth.lo - tol || depth > layers_.back().depth.hi + tol) {
    throw DomainError("material: depth " + std::to_string(depth) + " outside all layers");
  }
  // Last layer whose lower bound is <= depth: interfaces go to the deeper layer.
  auto it = std::upper_bound(layers_.begin(), layers_.end(), depth,
                             [](double d, const Layer& l) { return d < l.depth.lo; });
  if (it == layers_.begin()) return layers_.front().material;
  return std::prev(it)->material;
}

const BraggKleeman& MaterialField::at(std::span<const double> x) const {
  if (layers_.empty()) return single_;
  double depth = 0.0;
  for (std::size_t k = 0; k < omega_.size() && k < x.size(); ++k) depth += omega_[k] * x[k];
  return at_depth(depth);
}

std::vector<double> MaterialField::interfaces() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < layers_.size(); ++i) out.push_back(layers_[i].depth.lo);
  return out;
}

const BraggKleeman& MaterialField::min_alpha() const {
  if (layers_.empty()) return single_;
  return std::min_element(layers_.begin(), layers_.end(),
                          [](const Layer& a, const Layer& b) { return a.material.alpha < b.material.alpha; })
      ->material;
}

std::vector<const BraggKleeman*> MaterialField::all() const {
  std::vector<const BraggKleeman*> out;
  if (layers_.empty()) {
    out.push_back(&single_);
  } else {
    for (const auto& l : layers_) out.push_back(&l.material);
  }
  return out;
}

double epsilon_from_hg(double g_hg) {
  if (!(g_hg >= 0.0 && g_hg < 1.0)) {
    throw DomainError("epsilon_from_hg: anisotropy must lie in [0, 1)");
  }
  return 0.5 * (1.0 - g_hg);
}

ScatterModel ScatterModel::from_epsilon(double epsilon) {
  if (!(epsilon >= 0.0)) throw ConfigError("scatter: epsilon must be non-negative");
  return ScatterModel{epsilon, std::nullopt};
}

ScatterModel ScatterModel::from_hg(double g_hg) { return ScatterModel{epsilon_from_hg(g_hg), g_hg}; }

}  // namespace protonfem
