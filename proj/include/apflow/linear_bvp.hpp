#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "apflow/model_core.hpp"
#include "apflow/types.hpp"

namespace apflow {

using Vector3c = Eigen::Vector3cd;
using Matrix3c = Eigen::Matrix3cd;

/// The six integration constants of the bulk general solution, with the mode
/// amplitude h1 factored in.
struct ModeCoefficients {
  Complex C{0.0}, D{0.0}, E{0.0}, F{0.0}, G{0.0}, H{0.0};
};

/// Right-hand side of the free-surface stress balance, decomposed into its
/// three physical contributions.
struct BoundaryRHS {
  Vector3c surface_tension = Vector3c::Zero();
  Vector3c bulk_stress = Vector3c::Zero();
  Vector3c bottom = Vector3c::Zero();

  Vector3c total() const { return surface_tension + bulk_stress + bottom; }
};

/// No-slip at the translated bottom boundary fixes three constants outright:
/// C cancels the base shear sampled at z = g1 = h1, E and G vanish.
struct BottomConstants {
  double C = 0.0;
  double E = 0.0;
  double G = 0.0;
};

inline BottomConstants bottom_constants(double theta, double fA, double h1) {
  return BottomConstants{-3.0 * fA * std::sin(2.0 * theta) * h1, 0.0, 0.0};
}

/// Symmetric 3x3 system matrix for the remaining constants (D, F, H).
inline Matrix3c boundary_matrix(const Wavevector& k, double h0) {
  const double R = k.magnitude();
  const double Q = h0 * R;
  if (!(Q > 0.0)) throw ValidationError("boundary_matrix requires Q > 0");
  const double ch = std::cosh(Q);
  const double sh = std::sinh(Q);
  const double a = ch + 2.0 * Q * sh;
  const Complex i(0.0, 1.0);

  Matrix3c m;
  m(0, 0) = R * ch + k.k1 * k.k1 / R * a;
  m(0, 1) = k.k1 * k.k2 / R * a;
  m(0, 2) = -2.0 * i * k.k1 * Q * ch;
  m(1, 0) = m(0, 1);
  m(1, 1) = R * ch + k.k2 * k.k2 / R * a;
  m(1, 2) = -2.0 * i * k.k2 * Q * ch;
  m(2, 0) = m(0, 2);
  m(2, 1) = m(1, 2);
  m(2, 2) = 2.0 * R * (ch - Q * sh);
  return m;
}

/// Determinant of the boundary matrix in closed form.
inline double boundary_determinant(const Wavevector& k, double h0) {
  const double R = k.magnitude();
  const double Q = h0 * R;
  return 2.0 * R * R * R * std::cosh(Q) *
         (1.0 + 2.0 * Q * Q + std::cosh(2.0 * Q));
}

/// Assembles the stress-balance right-hand side. The three contributions are
/// surface tension, the beam stress acting in the bulk, and the effect of the
/// nonplanar bottom boundary (the eliminated constant C moved to the right).
inline BoundaryRHS boundary_rhs(const Wavevector& k, double theta, double eta,
                                double fA, double gamma, double h0,
                                double h1) {
  const double R = k.magnitude();
  const double Q = h0 * R;
  if (!(Q > 0.0)) throw ValidationError("boundary_rhs requires Q > 0");
  const double ch = std::cosh(Q);
  const double sh = std::sinh(Q);
  const double s2t = std::sin(2.0 * theta);
  const Complex i(0.0, 1.0);

  BoundaryRHS rhs;
  rhs.surface_tension = Vector3c(0.0, 0.0, -gamma * h1 * R * R);
  rhs.bulk_stress =
      Vector3c(-6.0 * eta * fA * h1 * i * k.k1 * std::cos(2.0 * theta),
               -6.0 * eta * fA * h1 * i * k.k2 * std::cos(theta) *
                   std::cos(theta),
               0.0);
  const double sb = sh + 2.0 * Q * ch;
  rhs.bottom = 3.0 * eta * fA * h1 * s2t *
               Vector3c(R * sh + k.k1 * k.k1 / R * sb,
                        k.k1 * k.k2 / R * sb, -2.0 * i * k.k1 * Q * sh);
  return rhs;
}

/// Cramer's-rule solution for (D, F, H) over the closed-form determinant.
/// The right-hand side is scaled by 1/eta to match the matrix normalization.
inline Vector3c solve_coefficients_closed(const Wavevector& k, double h0,
                                          double eta, const Vector3c& rhs) {
  const double R = k.magnitude();
  const double Q = h0 * R;
  if (!(Q > 0.0))
    throw ValidationError("solve_coefficients_closed requires Q > 0");
  const double ch = std::cosh(Q);
  const double sh = std::sinh(Q);
  const double delta = boundary_determinant(k, h0);
  const Complex al = rhs(0) / eta;
  const Complex be = rhs(1) / eta;
  const Complex ga = rhs(2) / eta;
  const Complex i(0.0, 1.0);
  const double cc = ch * ch;
  const double qsc = Q * sh * ch;

  Vector3c x;
  x(0) = (2.0 * al * R * R * (cc - qsc) +
          2.0 * k.k2 * (al * k.k2 - be * k.k1) * (cc + qsc + 2.0 * Q * Q) +
          2.0 * i * ga * k.k1 * R * Q * cc) /
         delta;
  x(1) = (2.0 * be * R * R * (cc - qsc) -
          2.0 * k.k1 * (al * k.k2 - be * k.k1) * (cc + qsc + 2.0 * Q * Q) +
          2.0 * i * ga * k.k2 * R * Q * cc) /
         delta;
  x(2) = (2.0 * i * R * (al * k.k1 + be * k.k2) * Q * cc +
          2.0 * ga * R * R * (cc + qsc)) /
         delta;
  return x;
}

struct DirectSolveResult {
  Vector3c x = Vector3c::Zero();
  double residual = 0.0;   // ||M x - b|| / ||b||
  double condition = 0.0;  // 2-norm condition estimate
};

/// Generic pivoted 3x3 complex solve, the oracle for the Cramer formulas.
/// Singular or near-singular systems are rejected rather than inverted.
inline DirectSolveResult solve_coefficients_direct(const Matrix3c& m,
                                                   const Vector3c& b) {
  Eigen::JacobiSVD<Matrix3c> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(2);
  if (!(smin > 0.0))
    throw NumericalError("solve_coefficients_direct: singular matrix");
  const double cond = smax / smin;
  if (cond > 1e14)
    throw NumericalError(
        "solve_coefficients_direct: matrix ill-conditioned (cond ~ " +
        std::to_string(cond) + ")");

  DirectSolveResult res;
  res.x = m.partialPivLu().solve(b);
  res.condition = cond;
  const double bn = b.norm();
  res.residual = bn > 0.0 ? (m * res.x - b).norm() / bn : (m * res.x).norm();
  return res;
}

/// z-profiles of the linearized pressure and velocity fields on [0, h0].
class FieldProfiles {
 public:
  FieldProfiles(const ModeCoefficients& c, const Wavevector& k, double eta)
      : c_(c), k_(k), eta_(eta), R_(k.magnitude()) {
    const Complex i(0.0, 1.0);
    t1_ = R_ * c_.G + i * k_.k1 * c_.D + i * k_.k2 * c_.F;
    t2_ = R_ * c_.H + i * k_.k1 * c_.C + i * k_.k2 * c_.E;
  }

  Complex pressure(double z) const {
    return -2.0 * eta_ *
           (t2_ * std::cosh(R_ * z) + t1_ * std::sinh(R_ * z));
  }
  Complex u(double z) const {
    const Complex i(0.0, 1.0);
    return c_.C * std::cosh(R_ * z) + c_.D * std::sinh(R_ * z) -
           i * k_.k1 / R_ * ramp(z);
  }
  Complex v(double z) const {
    const Complex i(0.0, 1.0);
    return c_.E * std::cosh(R_ * z) + c_.F * std::sinh(R_ * z) -
           i * k_.k2 / R_ * ramp(z);
  }
  Complex w(double z) const {
    return c_.G * std::cosh(R_ * z) + c_.H * std::sinh(R_ * z) -
           (t1_ * z * std::sinh(R_ * z) + t2_ * z * std::cosh(R_ * z));
  }

  const ModeCoefficients& coefficients() const { return c_; }

 private:
  Complex ramp(double z) const {
    return t1_ * z * std::cosh(R_ * z) + t2_ * z * std::sinh(R_ * z);
  }

  ModeCoefficients c_;
  Wavevector k_;
  double eta_;
  double R_;
  Complex t1_, t2_;
};

inline FieldProfiles evaluate_fields(const ModeCoefficients& coeffs,
                                     const Wavevector& k, double eta,
                                     double /*h0*/) {
  return FieldProfiles(coeffs, k, eta);
}

/// sigma from the linearized kinematic condition, normalized by h1.
inline ComplexGrowthRate sigma_from_kinematic(const FieldProfiles& profiles,
                                              const SteadyState& steady,
                                              const Wavevector& k, double h0,
                                              double h1) {
  if (h1 == 0.0)
    throw ValidationError("sigma_from_kinematic requires h1 != 0");
  const Complex i(0.0, 1.0);
  const double u0_top = steady.shear_coefficient * h0;  // v0 has no y-part
  return ComplexGrowthRate{profiles.w(h0) / h1 - u0_top * i * k.k1};
}

struct PipelineOptions {
  double h1 = 1.0;
  bool flat_bottom = false;  // diagnostic toggle g1 = 0
  bool use_direct_solve = false;
};

/// Full boundary-value pipeline: bottom constants, stress-balance solve, field
/// profiles, kinematic condition. Cross-checks the closed-form sigma_full.
inline ComplexGrowthRate sigma_pipeline(const Wavevector& k,
                                        const BeamParameters& beam,
                                        const FilmParameters& film,
                                        const PipelineOptions& opt = {}) {
  const double h0 = film.thickness;
  const double fA = beam.strain_rate();
  const BottomConstants bc =
      opt.flat_bottom ? BottomConstants{} :
                        bottom_constants(beam.theta, fA, opt.h1);
  BoundaryRHS rhs = boundary_rhs(k, beam.theta, film.viscosity, fA,
                                 film.surface_energy, h0, opt.h1);
  if (opt.flat_bottom) rhs.bottom.setZero();

  Vector3c dfh;
  if (opt.use_direct_solve) {
    const Matrix3c m = boundary_matrix(k, h0);
    dfh = solve_coefficients_direct(m, rhs.total() / film.viscosity).x;
  } else {
    dfh = solve_coefficients_closed(k, h0, film.viscosity, rhs.total());
  }

  ModeCoefficients coeffs;
  coeffs.C = bc.C;
  coeffs.E = bc.E;
  coeffs.G = bc.G;
  coeffs.D = dfh(0);
  coeffs.F = dfh(1);
  coeffs.H = dfh(2);

  const FieldProfiles profiles =
      evaluate_fields(coeffs, k, film.viscosity, h0);
  return sigma_from_kinematic(profiles, steady_state(beam, film), k, h0,
                              opt.h1);
}

}  // namespace apflow
