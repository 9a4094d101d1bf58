#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "apflow/dispersion.hpp"
#include "apflow/model_core.hpp"
#include "apflow/types.hpp"

namespace apflow {

/// Rival effective-body-force model. Its convention puts the free surface at
/// z = 0 and the crystalline interface at z = -d. The undefined stress piece
/// T^s is omitted; ts_omitted records that choice in output metadata.
struct EBFParameters {
  double f_E = 0.0;  // stress gradient magnitude, N/m^3
  double d = 0.0;    // film depth, m
  double eta = 0.0;  // Pa s
  std::function<double(double)> psi = [](double t) { return std::cos(t); };
  bool ts_omitted = true;

  void validate() const {
    if (!(d > 0.0)) throw ValidationError("ebf.d must be > 0");
    if (!(eta > 0.0)) throw ValidationError("ebf.eta must be > 0");
  }
};

/// EBF steady stress at depth z in [-d, 0], linear in z, zero at the free
/// surface, largest at the interface.
inline Eigen::Matrix2d ebf_steady_stress(double z, double theta,
                                         const EBFParameters& params) {
  params.validate();
  if (z < -params.d || z > 0.0)
    throw ValidationError("ebf_steady_stress requires -d <= z <= 0");
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  Eigen::Matrix2d m;
  m << ct, -st, -st, ct;
  return params.f_E * params.psi(theta) * z * m;
}

/// EBF ripple velocity as published, including the constant term that keeps
/// ripples moving at Q -> 0. Reproduced as printed, group-velocity slip and
/// all.
inline double ebf_ripple_velocity(double theta, double Q,
                                  const EBFParameters& params) {
  params.validate();
  return params.d * params.d * params.f_E * std::sin(2.0 * theta) *
         (1.0 - 0.375 * Q * Q) / (2.0 * params.eta);
}

/// Rescales f_E proportionally to a corrected steady-stress measurement.
inline double rescale_body_force(double fE_old, double stress_old,
                                 double stress_new) {
  if (!(stress_old > 0.0))
    throw ValidationError("rescale_body_force requires stress_old > 0");
  return fE_old * stress_new / stress_old;
}

struct ComparisonRow {
  double theta = 0.0;            // radians
  double v_apf = 0.0;            // m/s
  double v_ebf = 0.0;            // m/s
  double t_apf_interface = 0.0;  // Pa, 2-norm of the APF steady stress
  double t_ebf_interface = 0.0;  // Pa, 2-norm of the EBF stress at z = -d
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  double Q = 0.0;
  bool ebf_ts_omitted = true;
  // Qualitative contrasts between the two theories.
  bool apf_velocity_vanishes_at_q0 = true;
  bool ebf_velocity_nonzero_at_q0 = false;
  bool apf_vertical_stress_absent = true;
  bool ebf_vertical_stress_present = false;
};

/// Side-by-side prediction table at a common Q for each angle in the grid.
inline ComparisonTable comparison_table(const std::vector<double>& thetas,
                                        const BeamParameters& beam,
                                        const FilmParameters& film,
                                        const EBFParameters& ebf,
                                        double Q = 0.0) {
  ebf.validate();
  ComparisonTable table;
  table.Q = Q;
  table.ebf_ts_omitted = ebf.ts_omitted;
  table.rows.reserve(thetas.size());

  for (double theta : thetas) {
    BeamParameters b = beam;
    b.theta = theta;

    ComparisonRow row;
    row.theta = theta;
    // V_apf -> 0 as Q -> 0; at Q = 0 the limit is exact.
    row.v_apf = (Q > 0.0)
                    ? phase_velocity({Q / film.thickness, 0.0}, b, film)
                    : 0.0;
    row.v_ebf = ebf_ripple_velocity(theta, Q, ebf);

    const Tensor3 t_apf = steady_state(b, film).T0;
    row.t_apf_interface = t_apf.operatorNorm();
    row.t_ebf_interface =
        ebf_steady_stress(-ebf.d, theta, ebf).operatorNorm();

    if (std::abs(t_apf(0, 2)) > 0.0 || std::abs(t_apf(2, 2)) > 0.0)
      table.apf_vertical_stress_absent = false;
    const Eigen::Matrix2d t_ebf = ebf_steady_stress(-ebf.d, theta, ebf);
    // In the EBF tensor the second row/column carries the vertical direction;
    // a nonzero column means stress along z survives at a free surface.
    if (t_ebf.col(1).norm() > 0.0) table.ebf_vertical_stress_present = true;

    if (ebf_ripple_velocity(theta, 0.0, ebf) != 0.0)
      table.ebf_velocity_nonzero_at_q0 = true;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace apflow
