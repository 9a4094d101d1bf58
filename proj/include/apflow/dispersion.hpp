#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "apflow/model_core.hpp"
#include "apflow/types.hpp"

namespace apflow {

namespace detail {

// cosh(2Q) overflows a double near Q ~ 355; past Q = 30 every ratio below is
// evaluated with numerator and denominator scaled by exp(-2Q).
constexpr double kScaledFormThreshold = 30.0;

// sinh(x) - x with the small-x cancellation removed.
inline double sinh_minus_arg(double x) {
  if (std::abs(x) < 0.2) {
    const double x2 = x * x;
    return x * x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
  }
  return std::sinh(x) - x;
}

// The three Q-dependent ratios of the full dispersion relation, all sharing
// the denominator 1 + 2Q^2 + cosh(2Q):
//   bulk      = 1 / den                  (multiplies the APF k^2 terms)
//   bottom    = 2 cosh(Q) [Q^2 + sinh^2 Q] / den - cosh(Q)
//   leveling  = Q (sinh 2Q - 2Q) / den   (Orchard surface-tension factor)
struct QRatios {
  double bulk = 0.0;
  double bottom = 0.0;
  double leveling = 0.0;
};

inline QRatios q_ratios(double Q) {
  QRatios r;
  if (Q <= 0.0) return r;
  if (Q <= kScaledFormThreshold) {
    const double den = 1.0 + 2.0 * Q * Q + std::cosh(2.0 * Q);
    const double ch = std::cosh(Q);
    const double sh = std::sinh(Q);
    r.bulk = 1.0 / den;
    r.bottom = 2.0 * ch * (Q * Q + sh * sh) / den - ch;
    r.leveling = Q * sinh_minus_arg(2.0 * Q) / den;
  } else {
    // Multiply through by exp(-2Q). The bottom-boundary bracket uses its
    // algebraically reduced form -2 cosh(Q) / den, which is finite here while
    // the printed form is a difference of overflowing terms.
    const double e2 = std::exp(-2.0 * Q);
    const double e4 = e2 * e2;
    const double den_s = (1.0 + 2.0 * Q * Q) * e2 + 0.5 * (1.0 + e4);
    r.bulk = e2 / den_s;
    r.bottom = -(std::exp(-Q) + std::exp(-3.0 * Q)) / (2.0 * den_s);
    r.leveling = Q * (0.5 * (1.0 - e4) - 2.0 * Q * e2) / den_s;
  }
  return r;
}

// sigma decomposed per unit drive: sigma = fA * apf + (gamma / 2 eta h0) * st.
struct SigmaParts {
  Complex apf{0.0, 0.0};  // multiplies fA
  double st = 0.0;        // multiplies gamma / (2 eta h0), st <= 0
};

inline SigmaParts sigma_parts(double q1, double q2, double theta) {
  SigmaParts p;
  const double Q = std::hypot(q1, q2);
  if (Q == 0.0) return p;
  const QRatios r = q_ratios(Q);
  const double c2t = std::cos(2.0 * theta);
  const double ct = std::cos(theta);
  const double s2t = std::sin(2.0 * theta);
  const double re = -6.0 * (c2t * q1 * q1 + ct * ct * q2 * q2) * r.bulk;
  const double im = -3.0 * s2t * q1 * (1.0 + r.bottom);
  p.apf = Complex(re, im);
  p.st = -r.leveling;
  return p;
}

}  // namespace detail

/// Full dispersion relation sigma(k1, k2): APF bulk term, nonplanar-bottom
/// term, and Orchard surface-tension leveling. sigma(0) = 0.
inline ComplexGrowthRate sigma_full(const Wavevector& k,
                                    const BeamParameters& beam,
                                    const FilmParameters& film) {
  const double h0 = film.thickness;
  const auto parts = detail::sigma_parts(h0 * k.k1, h0 * k.k2, beam.theta);
  const double st_scale = film.surface_energy / (2.0 * film.viscosity * h0);
  return ComplexGrowthRate{beam.strain_rate() * parts.apf +
                           st_scale * parts.st};
}

/// Long-wavelength (Q << 1) limit of sigma_full. Valid for Q << 1 but may be
/// evaluated anywhere.
inline ComplexGrowthRate sigma_longwave(const Wavevector& k,
                                        const BeamParameters& beam,
                                        const FilmParameters& film) {
  const double h0 = film.thickness;
  const double q1 = h0 * k.k1;
  const double q2 = h0 * k.k2;
  const double Q2 = q1 * q1 + q2 * q2;
  const double fA = beam.strain_rate();
  const double c2t = std::cos(2.0 * beam.theta);
  const double ct = std::cos(beam.theta);
  const double re = -3.0 * fA * (c2t * q1 * q1 + ct * ct * q2 * q2) -
                    film.surface_energy / (3.0 * film.viscosity * h0) * Q2 * Q2;
  const double im = -4.5 * fA * std::sin(2.0 * beam.theta) * q1 * Q2;
  return ComplexGrowthRate{Complex(re, im)};
}

/// Lab-frame ripple propagation speed V = omega / k1 with omega = -Im sigma.
/// Algebraically V = 3 fA h0 sin(2 theta) [1 - 2 cosh Q / (1 + 2Q^2 + cosh 2Q)],
/// which is nonnegative for all theta and Q.
inline double phase_velocity(const Wavevector& k, const BeamParameters& beam,
                             const FilmParameters& film) {
  if (k.k1 == 0.0)
    throw ValidationError("phase_velocity requires k1 != 0");
  return -sigma_full(k, beam, film).sigma.imag() / k.k1;
}

/// Band of unstable dimensionless wavenumbers for the worst-case (parallel)
/// orientation. Empty when cos(2 theta) >= 0; otherwise (0, q_hi) with q_hi
/// the root of Re sigma = 0 (infinite when S = 0).
struct QInterval {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
};

inline QInterval unstable_band(double theta, double S) {
  if (!(S >= 0.0)) throw ValidationError("unstable_band requires S >= 0");
  QInterval band;
  const double c2t = std::cos(2.0 * theta);
  if (c2t >= 0.0) return band;  // every term stabilizing at or below 45 deg

  band.empty = false;
  band.lo = 0.0;
  if (S == 0.0) {
    band.hi = std::numeric_limits<double>::infinity();
    return band;
  }
  // Sign of Re sigma, with the common positive denominator and an exp(-2Q)
  // scaling factored out so the bracketing never overflows.
  const auto f = [&](double Q) {
    const double e2 = std::exp(-2.0 * Q);
    const double e4 = e2 * e2;
    return -6.0 * c2t * Q * Q * e2 -
           0.5 * S * Q * (0.5 * (1.0 - e4) - 2.0 * Q * e2);
  };
  double a = 1e-8;
  double b = 1.0;
  while (f(b) > 0.0) {
    a = b;
    b *= 2.0;
    if (b > 1e4)
      throw NumericalError("unstable_band: failed to bracket the band edge");
  }
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (f(m) > 0.0 ? a : b) = m;
    if (b - a <= 1e-10 * std::max(1.0, b)) break;
  }
  band.hi = 0.5 * (a + b);
  return band;
}

namespace detail {

// Golden-section maximization of g on [a, b] to relative width tol.
template <typename F>
double golden_section_max(F&& g, double a, double b, double rel_tol) {
  constexpr double phi = 0.6180339887498949;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double g1 = g(x1);
  double g2 = g(x2);
  while (b - a > rel_tol * std::max(std::abs(a), std::abs(b))) {
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + phi * (b - a);
      g2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - phi * (b - a);
      g1 = g(x1);
    }
  }
  return 0.5 * (a + b);
}

// Scan + refine maximizer of r(Q) on [1e-4, 10], ties toward smaller Q.
template <typename F>
std::pair<double, double> maximize_growth(F&& r) {
  constexpr int kPoints = 2000;
  const double lq0 = std::log(1e-4);
  const double lq1 = std::log(10.0);
  int best = 0;
  double best_r = -std::numeric_limits<double>::infinity();
  std::vector<double> qs(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    qs[i] = std::exp(lq0 + (lq1 - lq0) * i / (kPoints - 1));
    const double ri = r(qs[i]);
    if (ri > best_r) {
      best_r = ri;
      best = i;
    }
  }
  const double a = qs[std::max(0, best - 1)];
  const double b = qs[std::min(kPoints - 1, best + 1)];
  const double q_star = golden_section_max(r, a, b, 1e-10);
  return {q_star, r(q_star)};
}

}  // namespace detail

/// Maximizes Re sigma over wavevectors. The maximum always lies on one of the
/// two axes; the parallel and perpendicular axis maxima are compared directly.
inline ModeSelection most_unstable_mode(const BeamParameters& beam,
                                        const FilmParameters& film) {
  const double h0 = film.thickness;
  const auto r_par = [&](double Q) {
    return sigma_full({Q / h0, 0.0}, beam, film).sigma.real();
  };
  const auto r_perp = [&](double Q) {
    return sigma_full({0.0, Q / h0}, beam, film).sigma.real();
  };
  const auto [qp, rp] = detail::maximize_growth(r_par);
  const auto [qq, rq] = detail::maximize_growth(r_perp);

  ModeSelection sel;
  if (rp >= rq) {
    sel.orientation = Orientation::Parallel;
    sel.Q_star = qp;
    sel.r_star = rp;
  } else {
    sel.orientation = Orientation::Perpendicular;
    sel.Q_star = qq;
    sel.r_star = rq;
  }
  sel.stable = !(sel.r_star > 0.0);
  sel.lambda_star = sel.stable ? 0.0 : 2.0 * M_PI * h0 / sel.Q_star;
  return sel;
}

/// Longwave most-unstable wavelength from the measured normal-incidence
/// stress: lambda = 2 pi sqrt(4 gamma h0 / (3 |T0(0)| |cos 2 theta|)).
/// The absolute value keeps the radicand positive on the unstable range.
inline double wavelength_longwave(double theta, const FilmParameters& film,
                                  double t0_normal) {
  if (!(theta > M_PI / 4.0))
    throw ValidationError(
        "wavelength_longwave requires theta > 45 deg (no unstable mode below)");
  if (!(t0_normal > 0.0))
    throw ValidationError("wavelength_longwave requires |T0(0)| > 0");
  const double c2t = std::abs(std::cos(2.0 * theta));
  return 2.0 * M_PI * std::sqrt(4.0 * film.surface_energy * film.thickness /
                                (3.0 * t0_normal * c2t));
}

/// One row of an angle sweep over the full and longwave relations.
struct SweepPoint {
  double theta = 0.0;  // radians
  bool stable = true;
  double lambda_full = 0.0;      // m, 0 when stable
  double lambda_longwave = 0.0;  // m, 0 when theta <= 45 deg
  double Q_star = 0.0;
  double r_star = 0.0;          // 1/s
  double ripple_velocity = 0.0;  // m/s at Q_star
};

namespace detail {

// The real part of sigma is a weighted sum of k1^2 and k2^2 under a common
// Q-dependent envelope, so mixed orientations can never beat both axes.
// Checked once per sweep on a coarse 2-D grid.
inline bool axis_dominance_holds(const BeamParameters& beam,
                                 const FilmParameters& film) {
  const double h0 = film.thickness;
  double axis_max = -std::numeric_limits<double>::infinity();
  double mixed_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 24; ++i) {
    for (int j = 0; j <= 24; ++j) {
      const double q1 = 5.0 * i / 24.0;
      const double q2 = 5.0 * j / 24.0;
      if (q1 == 0.0 && q2 == 0.0) continue;
      const double r =
          sigma_full({q1 / h0, q2 / h0}, beam, film).sigma.real();
      if (i == 0 || j == 0)
        axis_max = std::max(axis_max, r);
      else
        mixed_max = std::max(mixed_max, r);
    }
  }
  return mixed_max <= axis_max + 1e-12 * std::abs(axis_max);
}

}  // namespace detail

/// Per-angle most-unstable mode from both dispersion relations.
inline std::vector<SweepPoint> angle_sweep(const BeamParameters& beam,
                                           const FilmParameters& film,
                                           const std::vector<double>& thetas) {
  std::vector<SweepPoint> table;
  if (thetas.empty()) return table;

  BeamParameters b = beam;
  b.theta = M_PI / 3.0;  // representative unstable angle for the axis check
  if (!detail::axis_dominance_holds(b, film))
    throw NumericalError("angle_sweep: mixed orientation beat the axis maxima");

  const double t0n = stress_magnitude_at_normal(beam, film);
  table.reserve(thetas.size());
  for (double theta : thetas) {
    b.theta = theta;
    const ModeSelection sel = most_unstable_mode(b, film);
    SweepPoint p;
    p.theta = theta;
    p.stable = sel.stable;
    p.Q_star = sel.Q_star;
    p.r_star = sel.r_star;
    if (!sel.stable) {
      p.lambda_full = sel.lambda_star;
      p.ripple_velocity = (sel.orientation == Orientation::Parallel)
                              ? phase_velocity(
                                    {sel.Q_star / film.thickness, 0.0}, b, film)
                              : 0.0;
    }
    if (theta > M_PI / 4.0 && std::cos(2.0 * theta) < 0.0 && t0n > 0.0 &&
        film.surface_energy > 0.0)
      p.lambda_longwave = wavelength_longwave(theta, film, t0n);
    table.push_back(p);
  }
  return table;
}

}  // namespace apflow
