// Acceptance checks 1-9. Usage: acceptance [--criterion N]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "protonfem/adaptivity.hpp"
#include "protonfem/analytic.hpp"
#include "protonfem/dose.hpp"
#include "protonfem/scenario.hpp"

using namespace protonfem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double max_diameter(const Mesh& mesh) {
  double h = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) h = std::max(h, mesh.cell_diameter(static_cast<int>(c)));
  return h;
}

// Least-squares slope of log(err) against log(h).
double ls_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const double n = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::shared_ptr<const FeSpace> space_of(const Scenario& s, int level) {
  return std::make_shared<const FeSpace>(std::make_shared<const Mesh>(initial_mesh(s, level)));
}

Scenario benchmark(int base_resolution) {
  Scenario s = preset_scenario("example1-supg");
  s.resolution = {base_resolution, base_resolution};
  return s;
}

bool report(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

DoseIntegrand integrand_of(const TransportSolution& sol, const Scenario& s) {
  return dose_integrand(fluence_function(sol.fluence), s.materials, energy_levels(sol.fluence.space->mesh()),
                        s.domain.spatial_dim);
}

// 1. SUPG energy-error rate on four uniform levels from 32x32.
bool criterion1() {
  const auto t0 = Clock::now();
  const Scenario s = benchmark(32);
  const auto prob = make_problem(s);
  const ExactFluence ex = *exact_solution(s);
  std::vector<double> hs, errs;
  for (int level = 0; level < 4; ++level) {
    const auto space = space_of(s, level);
    const TransportSolution sol = solve_transport(space, prob, SolverKind::Supg);
    const ErrorNorms e = error_norms(sol.fluence, ex, sol.coeffs);
    hs.push_back(max_diameter(space->mesh()));
    errs.push_back(e.energy);
    std::printf("  level %d: dofs %d, h %.5g, energy error %.6g, L2 error %.6g\n", level, space->num_nodes(),
                hs.back(), e.energy, e.l2);
  }
  for (std::size_t i = 1; i < hs.size(); ++i) {
    std::printf("  pairwise slope %zu->%zu: %.4f\n", i - 1, i,
                std::log(errs[i - 1] / errs[i]) / std::log(hs[i - 1] / hs[i]));
  }
  const double slope = ls_slope(hs, errs);
  const double t = seconds_since(t0);
  return report(1, slope >= 1.4 && t < 300.0,
                fmt("least-squares energy-norm slope %.4f (need >= 1.4), %.1f s (need < 300 s)", slope, t));
}

// 2. VI fluence stays in [0, sup g] on every benchmark level.
bool criterion2() {
  const auto t0 = Clock::now();
  const Scenario s = benchmark(32);
  const auto prob = make_problem(s);
  bool ok = true;
  for (int level = 0; level < 4; ++level) {
    const auto space = space_of(s, level);
    const TransportSolution sol = solve_transport(space, prob, SolverKind::Vi, s.vi);
    const auto [lo, hi] = min_max_nodal(sol.fluence.coefficients);
    const double tol = sol.report.tolerance;
    const bool level_ok = lo >= 0.0 && hi <= prob->inflow.sup && sol.report.complementarity <= tol;
    std::printf("  level %d: dofs %d, min %.6g, max %.10g, sup g %.10g, complementarity %.3g (tol %.3g), %d outer\n",
                level, space->num_nodes(), lo, hi, prob->inflow.sup, sol.report.complementarity, tol,
                sol.report.iterations);
    ok = ok && level_ok;
  }
  const double t = seconds_since(t0);
  return report(2, ok && t < 300.0, fmt("bounds and complementarity on all levels, %.1f s", t));
}

// 3. Unconstrained SUPG undershoots on the 64x64 benchmark, and so does its Galerkin dose past the peak.
bool criterion3() {
  const auto t0 = Clock::now();
  const Scenario s = preset_scenario("example1-supg");
  const auto prob = make_problem(s);
  const TransportSolution sol = solve_transport(space_of(s, 0), prob, SolverKind::Supg);
  const auto [flo, fhi] = min_max_nodal(sol.fluence.coefficients);
  int negative_nodes = 0;
  for (double v : sol.fluence.coefficients) negative_nodes += v < 0.0;

  const DoseField dose = dose_galerkin(integrand_of(sol, s), dose_space(s));
  const auto peak = std::max_element(dose.values.begin(), dose.values.end()) - dose.values.begin();
  const double peak_depth = dose.space->node(static_cast<int>(peak))[0];
  double worst = 0.0;
  int beyond = 0;
  for (int i = 0; i < dose.space->num_nodes(); ++i) {
    if (dose.space->node(i)[0] > peak_depth && dose.values[i] < 0.0) {
      ++beyond;
      worst = std::min(worst, dose.values[i]);
    }
  }
  std::printf("  fluence min %.6g (max %.6g), %d negative nodes\n", flo, fhi, negative_nodes);
  std::printf("  dose peak %.6g at depth %.4f, %d negative nodes beyond it, most negative %.6g\n",
              dose.values[peak], peak_depth, beyond, worst);
  const double t = seconds_since(t0);
  return report(3, flo < 0.0 && beyond > 0 && t < 60.0,
                fmt("fluence min %.4g < 0, %g negative dose nodes past the peak, %.1f s", flo, beyond, t));
}

// 4. Quadratic form against the energy norm for random discrete fields.
bool criterion4() {
  struct Setup {
    const char* label;
    Scenario scenario;
    double epsilon;
  };
  std::vector<Setup> setups;
  for (int n : {8, 16, 32}) {
    Scenario s = benchmark(n);
    s.name = "2d-" + std::to_string(n);
    setups.push_back({"2D", s, 0.0});
  }
  for (double eps : {0.0, 0.01}) {
    for (int n : {3, 4, 6}) {
      Scenario s = preset_scenario("example3");
      s.resolution = {n, n, n};
      setups.push_back({"3D", s, eps});
    }
  }
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int trials = 0, literal_fail = 0, corrected_fail = 0;
  double worst_ratio = 1e300;
  for (Setup& st : setups) {
    st.scenario.scatter = ScatterModel::from_epsilon(st.epsilon);
    auto prob = make_problem(st.scenario);
    const auto space = space_of(st.scenario, 0);
    const TransportCoefficients co = make_coefficients(*space, prob);
    const LinearSystem sys = assemble_system(*space, co);
    // Smallest -S' on the energy interval, halved.
    double min_dissipation = 1e300;
    for (const BraggKleeman* m : prob->materials.all()) {
      min_dissipation = std::min(min_dissipation, -stopping_power_derivative(*m, prob->domain.energy.hi));
    }
    TransportCoefficients corrected = co;
    corrected.mu = 0.5 * min_dissipation;
    int setup_fail = 0;
    for (int k = 0; k < 50; ++k) {
      std::vector<double> c(space->num_nodes());
      for (double& v : c) v = u(rng);
      const NodalField f(space, c);
      const double qf = quadratic_form(sys.matrix, c);
      const double norm2 = energy_norm_terms(*space, co, discrete_sampler(f)).energy_squared();
      const double corr2 = energy_norm_terms(*space, corrected, discrete_sampler(f)).energy_squared();
      const double scale = std::max(std::abs(qf), norm2);
      ++trials;
      if (qf < norm2 - 1e-8 * scale) {
        ++literal_fail;
        ++setup_fail;
      }
      if (qf < corr2 - 1e-8 * std::max(std::abs(qf), corr2)) ++corrected_fail;
      worst_ratio = std::min(worst_ratio, qf / norm2);
    }
    std::printf("  %s mesh %zu cells, eps %.3g: %d/50 trials below |||u|||^2 (mu = %.6g)\n", st.label,
                space->mesh().num_cells(), st.epsilon, setup_fail, co.mu);
  }
  std::printf("  smallest ratio quadratic form / |||u|||^2: %.6g\n", worst_ratio);
  std::printf("  with mu replaced by half the smallest -S': %d of %d trials below the norm\n", corrected_fail, trials);
  return report(4, literal_fail == 0,
                fmt("quadratic form >= |||u|||^2 failed in %g of %g trials (min ratio %.4g)", literal_fail, trials,
                    worst_ratio));
}

// 5. Consistency: interpolant residual decay, and the exact fluence solves the PDE along characteristics.
bool criterion5() {
  const Scenario s0 = benchmark(32);
  const ExactFluence ex = *exact_solution(s0);
  const BraggKleeman mat = ex.material();

  // Algebraic residual |A I_h ψ - b|_2 of the interpolant in the SUPG system, plus the
  // strong-form residual |L(I_h ψ)|_{L²} for reference (f = 0).
  const auto prob = make_problem(s0);
  const QuadratureRule rule = quadrature_for(4, 2);
  std::vector<double> hs, res, strong;
  for (int level = 0; level < 5; ++level) {
    const auto space = space_of(s0, level);
    const NodalField ih = interpolate(space, [&](const Point& x) { return ex.value(x); });
    const LinearSystem sys = assemble_system(*space, make_coefficients(*space, prob));
    const Vector r = sys.matrix * Eigen::Map<const Vector>(ih.coefficients.data(), ih.coefficients.size()) - sys.rhs;
    double sum = 0.0;
    for (int c = 0; c < space->num_cells(); ++c) {
      const Point g = gradient_in_cell(ih, c);
      const double vol = space->geometry(c).volume;
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& b = rule.points[q];
        const Point x = space->map_to_physical(c, b);
        const double v = value_in_cell(ih, c, b);
        const double l = g[0] - stopping_power_derivative(mat, x[1]) * v - stopping_power(mat, x[1]) * g[1];
        sum += rule.weights[q] * 2.0 * vol * l * l;
      }
    }
    hs.push_back(max_diameter(space->mesh()));
    res.push_back(r.norm());
    strong.push_back(std::sqrt(sum));
    std::printf("  level %d: h %.5g, |A I_h psi - b| %.6g, |L(I_h psi)| %.6g\n", level, hs.back(), res.back(),
                strong.back());
  }
  for (std::size_t i = 1; i < hs.size(); ++i) {
    const double dh = std::log(hs[i - 1] / hs[i]);
    std::printf("  pairwise rates %zu->%zu: algebraic %.4f, strong %.4f\n", i - 1, i, std::log(res[i - 1] / res[i]) / dh,
                std::log(strong[i - 1] / strong[i]) / dh);
  }
  const double rate = ls_slope(hs, res);
  std::printf("  least-squares rates: algebraic %.4f, strong %.4f\n", rate, ls_slope(hs, strong));

  // Forward difference along (ω, -S): (ψ(x + hω, E - hS) - ψ)/h - S'ψ = O(h).
  std::mt19937 rng(5);
  const GaussianSpectrum& g = ex.spectrum();
  std::uniform_real_distribution<double> ein(g.e0 - 2 * g.sigma(), g.e0 + 2 * g.sigma());
  std::uniform_real_distribution<double> frac(0.0, 0.9);
  int bad_tol = 0, bad_decay = 0;
  double worst_ratio = 1e300;
  for (int k = 0; k < 100; ++k) {
    const double e_in = ein(rng);
    const double z = frac(rng) * mat.alpha * std::pow(e_in, mat.p);
    const double e = std::pow(std::pow(e_in, mat.p) - z / mat.alpha, 1.0 / mat.p);
    const Point x{z, e, 0.0};
    const double psi = ex.value(x);
    const double s = stopping_power(mat, e);
    const double scale = std::abs(stopping_power_derivative(mat, e) * psi) + 1e-300;
    const auto residual = [&](double h) {
      const double ahead = ex.value({z + h, e - h * s, 0.0});
      return std::abs((ahead - psi) / h - stopping_power_derivative(mat, e) * psi) / scale;
    };
    const double h = 1e-4;
    const double r1 = residual(h), r2 = residual(h / 2);
    // The relative residual is bounded by a step-sized constant and halves with the step.
    if (r1 > 1e3 * h) ++bad_tol;
    if (r1 > 1e-12 && r1 / r2 < 1.8) ++bad_decay;
    if (r1 > 1e-12) worst_ratio = std::min(worst_ratio, r1 / r2);
  }
  std::printf("  characteristics: %d of 100 points over tolerance, %d without first-order decay, min halving ratio %.4f\n",
              bad_tol, bad_decay, worst_ratio);
  return report(5, rate >= 1.0 && bad_tol == 0 && bad_decay == 0,
                fmt("interpolant residual rate %.4f (need >= 1), characteristic residual first order at %g/100 points",
                    rate, 100 - std::max(bad_tol, bad_decay)));
}

// 6. Adaptive VI reaches the 4-level uniform error with under half the dofs.
bool criterion6() {
  const auto t0 = Clock::now();
  Scenario s = preset_scenario("example2-adaptive");
  const auto prob = make_problem(s);
  const ExactFluence ex = *exact_solution(s);
  const auto oracle = [&ex](const TransportSolution& sol) { return error_norms(sol.fluence, ex, sol.coeffs).energy; };

  const auto fine = space_of(s, 3);
  const TransportSolution uni = solve_transport(fine, prob, s.solver, s.vi);
  const double target = oracle(uni);
  const int uniform_dofs = fine->num_nodes();
  std::printf("  uniform level 3: dofs %d, energy error %.6g\n", uniform_dofs, target);

  AdaptOptions opts;
  opts.theta = 0.01;
  opts.max_levels = 12;
  opts.solver = s.solver;
  opts.vi = s.vi;
  opts.target_error = target;
  opts.oracle = oracle;
  const AdaptResult ad = adapt_loop(prob, std::make_shared<const Mesh>(initial_mesh(s)), opts);
  for (const AdaptLevel& l : ad.report.levels) {
    std::printf("  adaptive level %d: dofs %d, marked %d, eta %.6g, energy error %.6g\n", l.level, l.dofs, l.marked,
                l.eta_sum, *l.energy_error);
  }
  const AdaptLevel& last = ad.report.levels.back();
  const double ratio = static_cast<double>(last.dofs) / uniform_dofs;
  const bool reached = *last.energy_error <= target;
  const double t = seconds_since(t0);
  return report(6, reached && ratio < 0.5 && t < 600.0,
                fmt("adaptive error %.5g vs uniform %.5g with %.1f%% of the dofs, %.1f s", *last.energy_error, target,
                    100.0 * ratio, t));
}

// 7. Dose projections.
bool criterion7() {
  const Scenario s = preset_scenario("example1-vi");
  const auto prob = make_problem(s);
  const TransportSolution vi = solve_transport(space_of(s, 0), prob, SolverKind::Vi, s.vi);
  const DoseIntegrand integrand = integrand_of(vi, s);

  const DoseField ec = dose_element_constant(integrand, dose_space(s));
  const double ec_min = *std::min_element(ec.values.begin(), ec.values.end());
  const bool a = ec_min >= 0.0;
  std::printf("  (a) element-constant dose from VI fluence: min %.6g\n", ec_min);

  const DoseField dv = dose_vi(integrand, dose_space(s), s.vi);
  const double dv_min = *std::min_element(dv.values.begin(), dv.values.end());
  const bool b = dv_min >= 0.0 && dv.report.complementarity <= dv.report.tolerance;
  std::printf("  (b) VI dose: min %.6g, complementarity %.3g (tol %.3g), %d nodes at 0\n", dv_min,
              dv.report.complementarity, dv.report.tolerance, dv.report.active_lower);

  const Interval ext[] = {{0.0, 4.0}};
  const int res[] = {20};
  const auto coarse = std::make_shared<const FeSpace>(std::make_shared<const Mesh>(build_spatial_grid(ext, res)));
  const DoseIntegrand spike = [](const Point& x) { return std::exp(-std::pow((x[0] - 2.1) / 0.05, 2)); };
  const DoseField gs = dose_galerkin(spike, coarse);
  const double gs_min = *std::min_element(gs.values.begin(), gs.values.end());
  const bool c = gs_min < 0.0;
  std::printf("  (c) spiky integrand, Galerkin dose min %.6g\n", gs_min);

  // (d) fluence and dose meshes refined together.
  const Scenario b0 = benchmark(32);
  const auto bprob = make_problem(b0);
  const ExactFluence ex = *exact_solution(b0);
  const ScalarFunction exact_dose_fn = [&ex](const Point& x) { return exact_dose(ex, x, 20001); };
  std::vector<double> hs, errs;
  for (int level = 0; level < 5; ++level) {
    const auto space = space_of(b0, level);
    const TransportSolution sol = solve_transport(space, bprob, SolverKind::Supg);
    const Interval dext[] = {b0.domain.spatial_extent[0]};
    const int dres[] = {32 << level};
    const auto dspace = std::make_shared<const FeSpace>(std::make_shared<const Mesh>(build_spatial_grid(dext, dres)));
    const DoseField g = dose_galerkin(integrand_of(sol, b0), dspace);
    hs.push_back(max_diameter(space->mesh()));
    errs.push_back(dose_l2_error(g, exact_dose_fn));
    std::printf("  (d) level %d: fluence dofs %d, dose cells %d, L2 dose error %.6g\n", level, space->num_nodes(),
                dres[0], errs.back());
  }
  for (std::size_t i = 1; i < hs.size(); ++i) {
    std::printf("  (d) pairwise rate %zu->%zu: %.4f\n", i - 1, i, std::log(errs[i - 1] / errs[i]) / std::log(hs[i - 1] / hs[i]));
  }
  // Verdict on the four benchmark levels; the fifth is reported only.
  const double rate = ls_slope({hs.begin(), hs.begin() + 4}, {errs.begin(), errs.begin() + 4});
  std::printf("  (d) least-squares rate levels 0-3: %.4f, levels 1-4: %.4f\n", rate,
              ls_slope({hs.begin() + 1, hs.end()}, {errs.begin() + 1, errs.end()}));
  const bool d = rate >= 1.0;
  return report(7, a && b && c && d,
                fmt("(a) min %.3g, (b) min %.3g, (c) Galerkin min %.3g, (d) dose L2 rate %.4f (need >= 1)", ec_min,
                    dv_min, gs_min, rate));
}

// 8. Angular diffusion flattens the peak and widens the beam.
bool criterion8() {
  const auto t0 = Clock::now();
  const double eps_values[] = {0.0, 0.005, 0.01, 0.1};
  std::vector<double> peaks, moments;
  double reference_peak = 0.0;
  double reference_depth = 0.0;
  // Centred second moment of max(D, 0) across the beam at one depth.
  const auto transverse_moment = [](const DoseField& dose, const Interval& lat, double depth) {
    const int n = 401;
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = lat.lo + lat.length() * i / (n - 1);
      const double d = std::max(0.0, dose_value(dose, {x, depth, 0.0}));
      m0 += d;
      m1 += d * x;
      m2 += d * x * x;
    }
    const double mean = m1 / m0;
    return m2 / m0 - mean * mean;
  };
  for (double eps : eps_values) {
    Scenario s = preset_scenario("example3");
    s.scatter = ScatterModel::from_epsilon(eps);
    const auto prob = make_problem(s);
    const TransportSolution sol = solve_transport(space_of(s, 0), prob, s.solver, s.vi);
    const DoseField dose = compute_dose(s.dose_projection, integrand_of(sol, s), dose_space(s), s.vi);
    const auto imax = std::max_element(dose.values.begin(), dose.values.end()) - dose.values.begin();
    const double dmax = dose.values[imax];
    const Point at = dose.representation == DoseRepresentation::ElementConstant
                         ? dose.space->mesh().cell_centroid(static_cast<int>(imax))
                         : dose.space->node(static_cast<int>(imax));
    // Both quantities are taken relative to the eps = 0 run: peak heights on its
    // scale, lateral spread at its Bragg-peak depth.
    if (eps == 0.0) {
      reference_peak = dmax;
      reference_depth = at[1];
    }
    const Interval lat = s.domain.spatial_extent[0];
    peaks.push_back(dmax / reference_peak);
    moments.push_back(transverse_moment(dose, lat, reference_depth));
    std::printf(
        "  eps %.3g: fluence min %.4g, dose max %.6g at depth %.4f, normalised peak %.6f, second moment %.6g "
        "(at own peak depth %.6g)\n",
        eps, min_max_nodal(sol.fluence.coefficients).first, dmax, at[1], peaks.back(), moments.back(),
        transverse_moment(dose, lat, at[1]));
  }
  bool peaks_ok = true, moments_ok = true;
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    peaks_ok = peaks_ok && peaks[i] < peaks[i - 1];
    moments_ok = moments_ok && moments[i] > moments[i - 1];
  }
  const double t = seconds_since(t0);
  return report(8, peaks_ok && moments_ok && t < 900.0,
                fmt("normalised peaks %.4f, %.4f, %.4f, %.4f", peaks[0], peaks[1], peaks[2], peaks[3]) +
                    (peaks_ok ? " (strictly decreasing)" : " (NOT strictly decreasing)") +
                    fmt("; second moments at depth %.3f: %.4g, %.4g, %.4g", reference_depth, moments[0], moments[1],
                        moments[2]) +
                    fmt(", %.4g", moments[3]) + (moments_ok ? " (strictly increasing)" : " (NOT strictly increasing)") +
                    fmt(", %.1f s", t));
}

// 9. Layered orbital case.
bool criterion9() {
  const auto t0 = Clock::now();
  const Scenario s = preset_scenario("example4-orbital");
  const auto prob = make_problem(s);
  const TransportSolution sol = solve_transport(space_of(s, 0), prob, SolverKind::Vi, s.vi);
  const auto [lo, hi] = min_max_nodal(sol.fluence.coefficients);
  const DoseField dose = compute_dose(s.dose_projection, integrand_of(sol, s), dose_space(s), s.vi);
  const auto imax = std::max_element(dose.values.begin(), dose.values.end()) - dose.values.begin();
  const double depth = dose.space->node(static_cast<int>(imax))[0];
  // Largest fluence on the interface grid lines.
  double interface_max = 0.0;
  const auto interfaces = s.materials.interfaces();
  for (int i = 0; i < sol.fluence.space->num_nodes(); ++i) {
    const double x = sol.fluence.space->node(i)[0];
    for (double z : interfaces) {
      if (std::abs(x - z) < 1e-12) interface_max = std::max(interface_max, sol.fluence.coefficients[i]);
    }
  }
  const double t = seconds_since(t0);
  std::printf("  fluence min %.6g, max %.10g, sup g %.10g, max on interfaces %.10g\n", lo, hi, prob->inflow.sup,
              interface_max);
  std::printf("  dose max %.6g at depth %.4f cm, %.1f s\n", dose.values[imax], depth, t);
  // The low-density fat layer (rho 0.3) ahead of the tumour competes with the Bragg peak.
  double band_max = 0.0, band_at = 0.0;
  for (int i = 0; i < dose.space->num_nodes(); ++i) {
    const double x = dose.space->node(i)[0];
    if (x >= 2.7 && x <= 3.7 && dose.values[i] > band_max) band_max = dose.values[i], band_at = x;
  }
  std::printf("  largest dose inside [2.7, 3.7]: %.6g at %.4f cm (%.1f%% of the global maximum)\n", band_max, band_at,
              100.0 * band_max / dose.values[imax]);
  const bool ok = lo >= 0.0 && hi <= prob->inflow.sup && depth >= 2.7 && depth <= 3.7 && t < 300.0;
  return report(9, ok, fmt("min %.3g >= 0, max/sup %.6f <= 1, dose peak at %.3f cm (need [2.7, 3.7]), %.1f s", lo,
                           hi / prob->inflow.sup, depth, t));
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<bool()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                            criterion6, criterion7, criterion8, criterion9};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > 9) {
    std::fprintf(stderr, "criterion must be 1..9\n");
    return 2;
  }
  bool all = true;
  for (int k = 1; k <= 9; ++k) {
    if (only != 0 && k != only) continue;
    try {
      all = criteria[k - 1]() && all;
    } catch (const std::exception& e) {
      report(k, false, std::string("exception: ") + e.what());
      all = false;
    }
  }
  return all ? 0 : 1;
}
