#pragma once

#include <optional>
#include <vector>

#include "protonfem/assembly.hpp"
#include "protonfem/materials.hpp"

namespace protonfem {

/// g(E) = Φ C exp(-(E - E0)^2 / (2 δ^2 E0^2)); C normalises the integral over
/// the energy interval to Φ.
struct GaussianSpectrum {
  double e0 = 62.0;
  double delta = 0.01;
  double phi = 1.21e9;
  Interval energy{1.0, 70.0};
  double c = 0.0;

  static GaussianSpectrum make(double e0, double delta, double phi, Interval energy);

  [[nodiscard]] double sigma() const { return delta * e0; }
  [[nodiscard]] double value(double e) const;
  [[nodiscard]] double derivative(double e) const;
  [[nodiscard]] double peak() const { return phi * c; }
};

/// Transverse beam profile exp(-(t - center)^2 / (2 sigma^2)), t = x·ω⊥; peak 1.
struct LateralProfile {
  double center = 0.0;
  double sigma = 0.0;

  [[nodiscard]] double value(double t) const;
  [[nodiscard]] double derivative(double t) const;
};

/// Pristine Bragg fluence for a homogeneous medium and epsilon = 0:
///   ψ(x, E) = s^((1-p)/p) g(s^(1/p)) E^(p-1),  s = E^p + ω·x / α,
/// times the lateral profile when present. Zero where s ≤ 0.
class ExactFluence {
 public:
  ExactFluence(GaussianSpectrum spectrum, BraggKleeman material, std::vector<double> omega,
               std::optional<LateralProfile> lateral = std::nullopt);

  [[nodiscard]] int spatial_dim() const { return static_cast<int>(omega_.size()); }
  [[nodiscard]] const GaussianSpectrum& spectrum() const { return spectrum_; }
  [[nodiscard]] const BraggKleeman& material() const { return material_; }
  [[nodiscard]] const std::vector<double>& omega() const { return omega_; }

  /// Point in mesh coordinates (x..., E).
  [[nodiscard]] double value(const Point& x) const;
  /// Value and analytic gradient in mesh coordinates.
  [[nodiscard]] ValueGrad value_grad(const Point& x) const;
  /// Bragg–Kleeman range α E0^p.
  [[nodiscard]] double range() const;

 private:
  [[nodiscard]] double lateral_coordinate(const Point& x) const;

  GaussianSpectrum spectrum_;
  BraggKleeman material_;
  std::vector<double> omega_;
  std::optional<LateralProfile> lateral_;
};

/// ∫ S(E) ψ(x, E) / ρ dE by the composite trapezoid rule with `nodes` points.
/// `x` holds the spatial coordinates; the energy slot is ignored.
double exact_dose(const ExactFluence& ex, const Point& x, int nodes = 20001);

struct ErrorNorms {
  double l2 = 0.0;
  double energy = 0.0;
};

/// ‖ψ - ψ_h‖_{L²} and |||ψ - ψ_h||| by volume quadrature.
ErrorNorms error_norms(const NodalField& psi_h, const ExactFluence& ex,
                       const TransportCoefficients& coeffs, int degree = 4);

}  // namespace protonfem
