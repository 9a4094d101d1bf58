#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace apflow {

using Complex = std::complex<double>;
using Tensor3 = Eigen::Matrix3d;

/// Thrown on invalid user-facing input (parameters, config, CSV rows).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a linear solve is singular or too ill-conditioned to trust.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown on file-system failures.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ion beam drive: flux f, strain magnitude per ion A, incidence angle theta.
/// f*A has units of inverse time; theta is measured from the surface normal.
struct BeamParameters {
  double flux = 0.0;            // ions per m^2 per s
  double strain_per_ion = 0.0;  // m^2 per ion
  double theta = 0.0;           // radians, in [0, pi/2]

  double strain_rate() const { return flux * strain_per_ion; }  // fA, 1/s

  void validate() const {
    if (!(flux >= 0.0)) throw ValidationError("beam.flux must be >= 0");
    if (!(strain_per_ion >= 0.0))
      throw ValidationError("beam.strain_per_ion must be >= 0");
    if (!(theta >= 0.0 && theta <= M_PI / 2.0 + 1e-12))
      throw ValidationError("beam.theta must lie in [0, pi/2]");
  }
};

/// The amorphous film: viscosity, surface energy, unperturbed thickness.
struct FilmParameters {
  double viscosity = 0.0;       // Pa s
  double surface_energy = 0.0;  // J/m^2
  double thickness = 0.0;       // m

  void validate() const {
    if (!(viscosity > 0.0)) throw ValidationError("film.viscosity must be > 0");
    if (!(surface_energy >= 0.0))
      throw ValidationError("film.surface_energy must be >= 0");
    if (!(thickness > 0.0)) throw ValidationError("film.thickness must be > 0");
  }
};

/// Collapses gamma, eta, f, A, h0 into the single group S = gamma/(eta f A h0)
/// that controls the surface-tension term of the dispersion relation.
struct DimensionlessGroups {
  double S = 0.0;      // surface-tension number
  double theta = 0.0;  // radians
};

/// Flat-film base state: constant pressure, linear downbeam shear u0 = c z,
/// and the uniform stress tensor T0.
struct SteadyState {
  double p0 = 0.0;                 // Pa
  double shear_coefficient = 0.0;  // c, 1/s
  Tensor3 T0 = Tensor3::Zero();    // Pa
};

/// In-plane perturbation wavevector.
struct Wavevector {
  double k1 = 0.0;  // 1/m, along the projected beam direction
  double k2 = 0.0;  // 1/m, across it

  double magnitude() const { return std::hypot(k1, k2); }
  double q(double h0) const { return h0 * magnitude(); }  // Q = h0 |k|
};

/// Complex growth rate sigma = r - i omega of one normal mode.
struct ComplexGrowthRate {
  Complex sigma{0.0, 0.0};  // 1/s

  double growth_rate() const { return sigma.real(); }
  double angular_frequency() const { return -sigma.imag(); }
};

enum class Orientation { Parallel, Perpendicular };

inline const char* to_string(Orientation o) {
  return o == Orientation::Parallel ? "parallel" : "perpendicular";
}

/// Outcome of maximizing Re sigma over wavevectors.
struct ModeSelection {
  bool stable = true;
  Orientation orientation = Orientation::Parallel;
  double Q_star = 0.0;       // dimensionless wavenumber of the fastest mode
  double lambda_star = 0.0;  // m, 2 pi h0 / Q_star (unstable case only)
  double r_star = 0.0;       // 1/s, growth rate at the maximum
};

}  // namespace apflow
