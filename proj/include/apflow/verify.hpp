#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "apflow/collocation.hpp"
#include "apflow/dispersion.hpp"
#include "apflow/linear_bvp.hpp"
#include "apflow/types.hpp"

namespace apflow {

enum class VerifyGrid { Coarse, Full };

struct VerifyOptions {
  bool oracle = false;
  VerifyGrid grid = VerifyGrid::Full;
  int oracle_nodes = 48;
  double oracle_tolerance = 1e-8;
  // Test hook: relative perturbation of the (0,0) boundary-matrix entry,
  // used to confirm the equivalence check actually has teeth.
  double matrix_perturbation = 0.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::vector<std::pair<int, double>> oracle_convergence;  // (N, |sigma_N - ref|)

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

namespace detail {

inline std::vector<double> verify_thetas(VerifyGrid grid) {
  if (grid == VerifyGrid::Coarse) return {0.0, 30.0, 60.0, 80.0};
  return {0.0, 15.0, 30.0, 45.0, 50.0, 60.0, 70.0, 80.0, 90.0};
}

inline std::vector<double> verify_qs(VerifyGrid grid, bool pipeline) {
  if (grid == VerifyGrid::Coarse) return {0.3, 1.0, 3.0};
  if (pipeline)
    return {0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0};
  return {0.1, 0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0};
}

// Boundary-value pipeline via the direct matrix solve, with the perturbation
// hook.
inline Complex sigma_pipeline_direct(const Wavevector& k,
                                     const BeamParameters& beam,
                                     const FilmParameters& film,
                                     double perturbation) {
  const double h0 = film.thickness;
  const double fA = beam.strain_rate();
  Matrix3c m = boundary_matrix(k, h0);
  m(0, 0) *= (1.0 + perturbation);
  const BoundaryRHS rhs = boundary_rhs(k, beam.theta, film.viscosity, fA,
                                       film.surface_energy, h0, 1.0);
  const Vector3c dfh =
      solve_coefficients_direct(m, rhs.total() / film.viscosity).x;
  const BottomConstants bc = bottom_constants(beam.theta, fA, 1.0);
  ModeCoefficients coeffs;
  coeffs.C = bc.C;
  coeffs.D = dfh(0);
  coeffs.F = dfh(1);
  coeffs.H = dfh(2);
  const FieldProfiles profiles =
      evaluate_fields(coeffs, k, film.viscosity, h0);
  return sigma_from_kinematic(profiles, steady_state(beam, film), k, h0, 1.0)
      .sigma;
}

}  // namespace detail

/// Runs the internal cross-checks: boundary-value pipeline vs closed form,
/// determinant identity, Cramer vs direct solve, and (optionally) the
/// collocation oracle.
inline VerifyReport run_verification(const BeamParameters& beam,
                                     const FilmParameters& film,
                                     const VerifyOptions& opt = {}) {
  VerifyReport report;
  const double h0 = film.thickness;
  const double fA = beam.strain_rate();
  const auto thetas = detail::verify_thetas(opt.grid);

  double pipeline_err = 0.0;
  double det_err = 0.0;
  double cramer_err = 0.0;
  for (double theta_deg : thetas) {
    BeamParameters b = beam;
    b.theta = theta_deg * M_PI / 180.0;
    for (double q : detail::verify_qs(opt.grid, true)) {
      for (int orient = 0; orient < 2; ++orient) {
        const Wavevector k = orient == 0 ? Wavevector{q / h0, 0.0}
                                         : Wavevector{0.0, q / h0};
        const Complex closed = sigma_full(k, b, film).sigma;
        const Complex piped =
            detail::sigma_pipeline_direct(k, b, film, opt.matrix_perturbation);
        pipeline_err = std::max(
            pipeline_err,
            std::abs(piped - closed) /
                std::max(std::abs(closed), std::max(fA, 1.0) * 1e-12));

        const Matrix3c m = boundary_matrix(k, h0);
        const double delta = boundary_determinant(k, h0);
        det_err = std::max(det_err,
                           std::abs(m.determinant() - Complex(delta)) /
                               std::abs(delta));

        const BoundaryRHS rhs = boundary_rhs(
            k, b.theta, film.viscosity, fA, film.surface_energy, h0, 1.0);
        const Vector3c x_closed =
            solve_coefficients_closed(k, h0, film.viscosity, rhs.total());
        const Vector3c x_direct =
            solve_coefficients_direct(m, rhs.total() / film.viscosity).x;
        const double scale = std::max(x_closed.norm(), 1e-300);
        cramer_err =
            std::max(cramer_err, (x_closed - x_direct).norm() / scale);
      }
    }
  }
  report.checks.push_back(
      {"pipeline-vs-closed-form sigma", pipeline_err <= 1e-10, pipeline_err,
       1e-10});
  report.checks.push_back(
      {"boundary-matrix determinant identity", det_err <= 1e-10, det_err,
       1e-10});
  report.checks.push_back(
      {"cramer-vs-direct coefficients", cramer_err <= 1e-12, cramer_err,
       1e-12});

  if (opt.oracle) {
    double oracle_err = 0.0;
    const CollocationConfig cc{opt.oracle_nodes};
    for (double theta_deg : thetas) {
      BeamParameters b = beam;
      b.theta = theta_deg * M_PI / 180.0;
      for (double q : detail::verify_qs(opt.grid, false)) {
        for (int orient = 0; orient < 2; ++orient) {
          const Wavevector k = orient == 0 ? Wavevector{q / h0, 0.0}
                                           : Wavevector{0.0, q / h0};
          const Complex closed = sigma_full(k, b, film).sigma;
          const Complex num = sigma_collocation(k, b, film, cc).sigma;
          oracle_err = std::max(
              oracle_err,
              std::abs(num - closed) /
                  std::max(std::abs(closed), std::max(fA, 1.0) * 1e-12));
        }
      }
    }
    report.checks.push_back({"collocation oracle vs closed form",
                             oracle_err <= opt.oracle_tolerance, oracle_err,
                             opt.oracle_tolerance});

    BeamParameters b = beam;
    b.theta = M_PI / 3.0;
    report.oracle_convergence = convergence_study(
        {1.0 / h0 * 0.8, 0.0}, b, film, {8, 12, 16, 24, 32, 48, 64});
  }
  return report;
}

}  // namespace apflow
