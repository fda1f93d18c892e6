#include "protonfem/analytic.hpp"

#include <cmath>
#include <numbers>

#include "protonfem/error.hpp"

namespace protonfem {

GaussianSpectrum GaussianSpectrum::make(double e0, double delta, double phi, Interval energy) {
  if (!(e0 > 0.0) || !(delta > 0.0) || !(phi >= 0.0)) {
    throw ConfigError("spectrum: E0 and delta must be positive and phi non-negative");
  }
  if (!(energy.hi > energy.lo)) throw ConfigError("spectrum: empty energy interval");
  GaussianSpectrum g;
  g.e0 = e0;
  g.delta = delta;
  g.phi = phi;
  g.energy = energy;
  const double s = g.sigma();
  const double r2 = std::sqrt(2.0) * s;
  const double mass = s * std::sqrt(std::numbers::pi / 2.0) *
                      (std::erf((energy.hi - e0) / r2) - std::erf((energy.lo - e0) / r2));
  g.c = 1.0 / mass;
  return g;
}

double GaussianSpectrum::value(double e) const {
  const double z = (e - e0) / sigma();
  return phi * c * std::exp(-0.5 * z * z);
}

double GaussianSpectrum::derivative(double e) const {
  const double s = sigma();
  return -value(e) * (e - e0) / (s * s);
}

double LateralProfile::value(double t) const {
  const double z = (t - center) / sigma;
  return std::exp(-0.5 * z * z);
}

double LateralProfile::derivative(double t) const { return -value(t) * (t - center) / (sigma * sigma); }

ExactFluence::ExactFluence(GaussianSpectrum spectrum, BraggKleeman material, std::vector<double> omega,
                           std::optional<LateralProfile> lateral)
    : spectrum_(spectrum), material_(material), omega_(std::move(omega)), lateral_(lateral) {
  material_.validate();
  if (omega_.empty() || omega_.size() > 2) throw ConfigError("exact fluence: omega needs 1 or 2 entries");
  if (lateral_ && omega_.size() != 2) throw ConfigError("exact fluence: lateral profile needs 2D space");
  if (lateral_ && !(lateral_->sigma > 0.0)) throw ConfigError("exact fluence: lateral sigma must be > 0");
}

double ExactFluence::range() const { return material_.alpha * std::pow(spectrum_.e0, material_.p); }

double ExactFluence::lateral_coordinate(const Point& x) const {
  return -omega_[1] * x[0] + omega_[0] * x[1];
}

double ExactFluence::value(const Point& x) const { return value_grad(x).value; }

ValueGrad ExactFluence::value_grad(const Point& x) const {
  const int sd = spatial_dim();
  const double alpha = material_.alpha;
  const double p = material_.p;
  const double e = x[sd];
  if (!(e > 0.0)) throw DomainError("exact fluence: energy must be positive");
  double depth = 0.0;
  for (int k = 0; k < sd; ++k) depth += omega_[k] * x[k];
  const double s = std::pow(e, p) + depth / alpha;
  ValueGrad out;
  if (s <= 0.0) return out;

  const double a = (1.0 - p) / p;
  const double e_in = std::pow(s, 1.0 / p);
  const double g = spectrum_.value(e_in);
  const double dg = spectrum_.derivative(e_in);
  const double sa = std::pow(s, a);
  const double f = sa * g;
  const double df = a * sa / s * g + sa * dg * (1.0 / p) * e_in / s;
  const double ep1 = std::pow(e, p - 1.0);

  out.value = f * ep1;
  for (int k = 0; k < sd; ++k) out.grad[k] = df * (omega_[k] / alpha) * ep1;
  out.grad[sd] = df * p * ep1 * ep1 + f * (p - 1.0) * ep1 / e;

  if (lateral_) {
    const double t = lateral_coordinate(x);
    const double l = lateral_->value(t);
    const double dl = lateral_->derivative(t);
    const std::array<double, 2> dt{-omega_[1], omega_[0]};
    for (int k = 0; k < sd; ++k) out.grad[k] = out.grad[k] * l + out.value * dl * dt[k];
    out.grad[sd] *= l;
    out.value *= l;
  }
  return out;
}

double exact_dose(const ExactFluence& ex, const Point& x, int nodes) {
  if (nodes < 2) throw DomainError("exact dose: at least two quadrature nodes required");
  const Interval en = ex.spectrum().energy;
  const int sd = ex.spatial_dim();
  const double h = en.length() / (nodes - 1);
  Point y = x;
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double e = en.lo + i * h;
    y[sd] = e;
    const double w = (i == 0 || i == nodes - 1) ? 0.5 * h : h;
    sum += w * stopping_power(ex.material(), e) * ex.value(y);
  }
  return sum / ex.material().rho;
}

ErrorNorms error_norms(const NodalField& psi_h, const ExactFluence& ex, const TransportCoefficients& coeffs,
                       int degree) {
  const FieldSampler diff =
      difference_sampler(discrete_sampler(psi_h), analytic_sampler([&ex](const Point& x) { return ex.value_grad(x); }));
  const EnergyNormTerms t = energy_norm_terms(*psi_h.space, coeffs, diff, degree);
  ErrorNorms out;
  out.l2 = coeffs.mu > 0.0 ? std::sqrt(t.reaction / coeffs.mu) : 0.0;
  out.energy = std::sqrt(t.energy_squared());
  return out;
}

}  // namespace protonfem
