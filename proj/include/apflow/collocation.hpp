#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "apflow/model_core.hpp"
#include "apflow/types.hpp"

namespace apflow {

struct CollocationConfig {
  int node_count = 48;  // >= 8
};

struct OracleResult {
  Complex sigma{0.0, 0.0};
  double residual_norm = 0.0;  // ||A x - b|| / ||b||
  int n_used = 0;
  double rcond = 0.0;
};

namespace detail {

// Chebyshev extrema nodes on [-1, 1] (x0 = 1 first) and the associated
// differentiation matrix.
inline std::pair<Eigen::MatrixXd, Eigen::VectorXd> cheb_diff(int n) {
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x(j) = std::cos(M_PI * j / (n - 1));
  Eigen::VectorXd c = Eigen::VectorXd::Ones(n);
  c(0) = 2.0;
  c(n - 1) = 2.0;
  for (int j = 0; j < n; ++j) c(j) *= (j % 2 == 0) ? 1.0 : -1.0;

  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = c(i) / c(j) / (x(i) - x(j));
      row_sum += d(i, j);
    }
    d(i, i) = -row_sum;  // negative-sum trick keeps constants exact
  }
  return {d, x};
}

}  // namespace detail

/// Independent spectral solver for the linearized Stokes boundary-value
/// problem in z. Discretizes the bulk momentum and continuity equations at
/// Chebyshev nodes on [0, h0], replaces boundary rows with the linearized
/// no-slip and stress-balance conditions, and reads sigma off the kinematic
/// condition. Makes no reference to the closed-form solution.
inline OracleResult sigma_collocation(const Wavevector& k,
                                      const BeamParameters& beam,
                                      const FilmParameters& film,
                                      const CollocationConfig& config = {}) {
  const int n = config.node_count;
  if (n < 8) throw ValidationError("collocation requires node_count >= 8");
  const double h0 = film.thickness;
  const double q = k.q(h0);
  if (!(q > 0.0)) throw ValidationError("collocation requires Q > 0");

  const auto [d1x, x] = detail::cheb_diff(n);
  // z = h0 (x + 1) / 2, node 0 the free surface, node n-1 the bottom.
  // Assembled in units of h0, with pressure scaled by eta / h0, so every
  // matrix entry is order one and the condition estimate is meaningful.
  const Eigen::MatrixXd dz = 2.0 * d1x;  // d/d(z / h0)
  const Eigen::MatrixXd dz2 = dz * dz;

  const double eta = film.viscosity;
  const double fA = beam.strain_rate();
  const double gamma = film.surface_energy;
  const double theta = beam.theta;
  const double c = 3.0 * fA * std::sin(2.0 * theta);  // base shear u0 = c z
  const double q1 = k.k1 * h0;
  const double q2 = k.k2 * h0;
  const double qq = q1 * q1 + q2 * q2;
  const Complex i(0.0, 1.0);
  const double h1 = 1.0;  // sigma is independent of the mode amplitude

  // Unknown layout: [u(0..n-1), v, w, p h0 / eta].
  const int nu = 0, nv = n, nw = 2 * n, np = 3 * n;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4 * n, 4 * n);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(4 * n);

  const Eigen::MatrixXd lap = dz2 - qq * Eigen::MatrixXd::Identity(n, n);
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) {
      a(nu + r, nu + j) = lap(r, j);                 // x momentum
      a(nv + r, nv + j) = lap(r, j);                 // y momentum
      a(nw + r, nw + j) = lap(r, j);                 // z momentum
      a(nw + r, np + j) = -dz(r, j);                 //   - p'
      a(np + r, nw + j) = dz(r, j);                  // continuity: w'
    }
    a(nu + r, np + r) = -i * q1;
    a(nv + r, np + r) = -i * q2;
    a(np + r, nu + r) = i * q1;
    a(np + r, nv + r) = i * q2;
  }

  const int top = 0, bot = n - 1;
  // Bottom: no slip at the translated boundary, v1(0) = -v0'(0) h1.
  a.row(nu + bot).setZero();
  a(nu + bot, nu + bot) = 1.0;
  b(nu + bot) = -c * h1;
  a.row(nv + bot).setZero();
  a(nv + bot, nv + bot) = 1.0;
  a.row(nw + bot).setZero();
  a(nw + bot, nw + bot) = 1.0;

  // Top: linearized stress balance T0.n1 + T1.n0 = -gamma kappa1 n0 with
  // kappa1 = R^2 h1 and n1 = (-i k1 h1, -i k2 h1, 0), scaled by h0 / eta.
  a.row(nu + top).setZero();
  for (int j = 0; j < n; ++j) a(nu + top, nu + j) = dz(top, j);
  a(nu + top, nw + top) += i * q1;
  b(nu + top) = -6.0 * i * fA * std::cos(2.0 * theta) * q1 * h1;

  a.row(nv + top).setZero();
  for (int j = 0; j < n; ++j) a(nv + top, nv + j) = dz(top, j);
  a(nv + top, nw + top) += i * q2;
  b(nv + top) =
      -6.0 * i * fA * std::cos(theta) * std::cos(theta) * q2 * h1;

  a.row(nw + top).setZero();
  for (int j = 0; j < n; ++j) a(nw + top, nw + j) = 2.0 * dz(top, j);
  a(nw + top, np + top) = -1.0;
  b(nw + top) = -gamma * qq * h1 / (eta * h0);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
    throw NumericalError(
        "collocation system ill-conditioned (rcond ~ " +
        std::to_string(rcond) + ")");
  const Eigen::VectorXcd sol = lu.solve(b);

  OracleResult res;
  res.n_used = n;
  res.rcond = rcond;
  const double bn = b.norm();
  res.residual_norm =
      bn > 0.0 ? (a * sol - b).norm() / bn : (a * sol).norm();
  res.sigma = sol(nw + top) / h1 - i * k.k1 * c * h0;
  return res;
}

/// Error of sigma_collocation at each N against the largest-N reference.
inline std::vector<std::pair<int, double>> convergence_study(
    const Wavevector& k, const BeamParameters& beam,
    const FilmParameters& film, const std::vector<int>& n_list) {
  std::vector<std::pair<int, double>> table;
  if (n_list.empty()) return table;
  for (size_t j = 1; j < n_list.size(); ++j)
    if (n_list[j] <= n_list[j - 1])
      throw ValidationError("convergence_study requires ascending N list");

  const Complex ref =
      sigma_collocation(k, beam, film, {n_list.back()}).sigma;
  table.reserve(n_list.size());
  for (int n : n_list)
    table.emplace_back(
        n, std::abs(sigma_collocation(k, beam, film, {n}).sigma - ref));
  return table;
}

}  // namespace apflow
