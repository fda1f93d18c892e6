#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "protonfem/mesh.hpp"

namespace protonfem {

/// Bragg–Kleeman range–energy parameters: S(E) = E^(1-p) / (alpha p).
struct BraggKleeman {
  double alpha = 0.00246;  // cm MeV^-p
  double p = 1.75;
  double rho = 1.0;  // g/cm^3

  void validate() const;
};

/// Stopping power in MeV/cm. Throws DomainError for E <= 0.
double stopping_power(const BraggKleeman& mat, double energy);

/// dS/dE. Throws DomainError for E <= 0.
double stopping_power_derivative(const BraggKleeman& mat, double energy);

/// mu = -S'(E_min).
double dissipation_mu(const BraggKleeman& mat, double e_min);

/// Named parameter sets: "water", "muscle", "bone", "lung" (range–energy
/// table) and "water-bortfeld" (alpha = 2.2e-3, p = 1.77). Density defaults to 1.
BraggKleeman material_preset(const std::string& name);
std::vector<std::string> material_preset_names();

struct Layer {
  std::string name;
  Interval depth;  // along omega, cm
  BraggKleeman material;
};

/// Material lookup by spatial position. Either homogeneous or a stack of
/// planar layers normal to the beam; depth = omega · x.
class MaterialField {
 public:
  explicit MaterialField(BraggKleeman homogeneous);
  /// Layers must be contiguous and ordered; throws ConfigError otherwise.
  MaterialField(std::vector<Layer> layers, std::vector<double> omega);

  [[nodiscard]] bool homogeneous() const { return layers_.empty(); }
  [[nodiscard]] const std::vector<Layer>& layers() const { return layers_; }

  /// Material at spatial position x (first spatial_dim entries used). Layer
  /// interfaces belong to the deeper layer. Throws DomainError when the depth
  /// lies outside every layer.
  [[nodiscard]] const BraggKleeman& at(std::span<const double> x) const;
  [[nodiscard]] const BraggKleeman& at_depth(double depth) const;

  /// Interior layer interfaces (depth values).
  [[nodiscard]] std::vector<double> interfaces() const;

  /// Material with the smallest alpha.
  [[nodiscard]] const BraggKleeman& min_alpha() const;

  [[nodiscard]] std::vector<const BraggKleeman*> all() const;

 private:
  BraggKleeman single_;
  std::vector<Layer> layers_;
  std::vector<double> omega_;
};

/// Angular diffusion coefficient, optionally derived from a Henyey–Greenstein anisotropy.
struct ScatterModel {
  double epsilon = 0.0;
  std::optional<double> g_hg;

  static ScatterModel from_epsilon(double epsilon);
  static ScatterModel from_hg(double g_hg);
};

/// epsilon = (1 - g)/2. Throws DomainError unless 0 <= g < 1.
double epsilon_from_hg(double g_hg);

}  // namespace protonfem
