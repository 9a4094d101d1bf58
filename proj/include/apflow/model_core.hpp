#pragma once

#include <cmath>

#include "apflow/types.hpp"

namespace apflow {

/// Rotation about the y-axis by theta.
inline Tensor3 rotation_y(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Tensor3 r;
  r << c, 0.0, -s,  //
      0.0, 1.0, 0.0,  //
      s, 0.0, c;
  return r;
}

/// Normal-incidence beam strain shape: in-plane expansion, vertical thinning.
inline Tensor3 apf_tensor_normal() {
  Tensor3 d = Tensor3::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  d(2, 2) = -2.0;
  return d;
}

/// Beam strain tensor at incidence theta, the normal-incidence shape
/// conjugated by the rotation that tilts the beam into the x-z plane.
/// Symmetric and trace-free for every theta; the x-z entry is
/// (3/2) sin(2 theta).
inline Tensor3 apf_tensor(double theta) {
  return rotation_y(theta) * apf_tensor_normal() * rotation_y(-theta);
}

/// Flat-film steady state: uniform pressure, downbeam shear u0 = c z, and the
/// residual stress tensor with relaxed vertical components.
inline SteadyState steady_state(const BeamParameters& beam,
                                const FilmParameters& film) {
  beam.validate();
  film.validate();
  const double fA = beam.strain_rate();
  const double c2t = std::cos(2.0 * beam.theta);
  const double ct = std::cos(beam.theta);

  SteadyState s;
  s.p0 = film.viscosity * fA * (3.0 * c2t + 1.0);
  s.shear_coefficient = 3.0 * fA * std::sin(2.0 * beam.theta);
  s.T0 = Tensor3::Zero();
  s.T0(0, 0) = -6.0 * film.viscosity * fA * c2t;
  s.T0(1, 1) = -6.0 * film.viscosity * fA * ct * ct;
  return s;
}

/// |T0(0)| = 6 eta f A, the magnitude of the in-plane steady stress at normal
/// incidence. This is the experimentally accessible handle on eta*f*A.
inline double stress_magnitude_at_normal(const BeamParameters& beam,
                                         const FilmParameters& film) {
  return 6.0 * film.viscosity * beam.strain_rate();
}

/// Inverse of stress_magnitude_at_normal: eta*f*A = |T0(0)| / 6.
inline double infer_eta_fA_from_stress(double t0_normal) {
  if (!(t0_normal >= 0.0))
    throw ValidationError("steady stress magnitude must be >= 0");
  return t0_normal / 6.0;
}

/// S = gamma / (eta f A h0), equivalently 6 gamma / (|T0(0)| h0).
inline DimensionlessGroups surface_tension_number(const BeamParameters& beam,
                                                  const FilmParameters& film) {
  const double denom =
      film.viscosity * beam.strain_rate() * film.thickness;
  if (!(denom > 0.0))
    throw ValidationError(
        "surface_tension_number requires eta * f * A * h0 > 0");
  return DimensionlessGroups{film.surface_energy / denom, beam.theta};
}

}  // namespace apflow
