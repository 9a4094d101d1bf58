#include <doctest.h>

#include <cmath>

#include "apflow/dispersion.hpp"
#include "apflow/linear_bvp.hpp"

using namespace apflow;

namespace {

const FilmParameters kFilm{1.0, 1.36, 3e-9};
BeamParameters beam_at(double theta_deg) {
  return BeamParameters{1e18, 0.25e9 * 1e-18, theta_deg * M_PI / 180.0};
}
Wavevector wv(double q1, double q2) {
  return {q1 / kFilm.thickness, q2 / kFilm.thickness};
}

const double kThetaGrid[] = {0, 15, 30, 45, 50, 60, 70, 80, 90};
const double kQGrid[] = {0.1, 0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0};

}  // namespace

TEST_CASE("pipeline reproduces the closed-form growth rate") {
  for (double deg : kThetaGrid) {
    const BeamParameters beam = beam_at(deg);
    for (double q : kQGrid) {
      for (const Wavevector& k : {wv(q, 0.0), wv(0.0, q)}) {
        const Complex closed = sigma_full(k, beam, kFilm).sigma;
        const Complex piped = sigma_pipeline(k, beam, kFilm).sigma;
        const double scale = std::max(std::abs(closed), beam.strain_rate());
        CHECK(std::abs(piped - closed) <= 1e-10 * scale);
      }
    }
  }

  SUBCASE("mixed orientation") {
    const BeamParameters beam = beam_at(55);
    for (double q : {0.3, 0.9, 2.2}) {
      const Wavevector k = wv(q * 0.6, q * 0.8);
      const Complex closed = sigma_full(k, beam, kFilm).sigma;
      const Complex piped = sigma_pipeline(k, beam, kFilm).sigma;
      CHECK(std::abs(piped - closed) <= 1e-10 * std::abs(closed));
    }
  }
}

TEST_CASE("boundary matrix and determinant") {
  for (double q : kQGrid) {
    for (const Wavevector& k : {wv(q, 0.0), wv(0.0, q), wv(q * 0.6, q * 0.8)}) {
      const Matrix3c m = boundary_matrix(k, kFilm.thickness);
      CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);

      const Complex det = m.determinant();
      const double closed = boundary_determinant(k, kFilm.thickness);
      CHECK(std::abs(det - closed) <= 1e-10 * std::abs(closed));
    }
  }
  CHECK_THROWS_AS(boundary_matrix({0.0, 0.0}, kFilm.thickness),
                  ValidationError);
}

TEST_CASE("closed Cramer solve matches a pivoted direct solve") {
  for (double deg : {0.0, 30.0, 60.0, 85.0}) {
    for (double q : kQGrid) {
      const Wavevector k = wv(q * 0.6, q * 0.8);
      const auto rhs = boundary_rhs(k, deg * M_PI / 180.0, kFilm.viscosity,
                                    beam_at(deg).strain_rate(),
                                    kFilm.surface_energy, kFilm.thickness,
                                    1.0);
      const Vector3c closed = solve_coefficients_closed(
          k, kFilm.thickness, kFilm.viscosity, rhs.total());
      const auto direct = solve_coefficients_direct(
          boundary_matrix(k, kFilm.thickness),
          rhs.total() / kFilm.viscosity);
      CHECK((closed - direct.x).norm() <= 1e-12 * closed.norm());
      CHECK(direct.residual <= 1e-13);
    }
  }

  SUBCASE("direct and closed pipelines agree") {
    PipelineOptions direct;
    direct.use_direct_solve = true;
    const Wavevector k = wv(0.8, 0.0);
    const Complex a = sigma_pipeline(k, beam_at(60), kFilm).sigma;
    const Complex b = sigma_pipeline(k, beam_at(60), kFilm, direct).sigma;
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
  }

  SUBCASE("singular matrix is rejected") {
    Matrix3c m = Matrix3c::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    CHECK_THROWS_AS(solve_coefficients_direct(m, Vector3c::Ones()),
                    NumericalError);
  }
}

TEST_CASE("right-hand side decomposition") {
  const Wavevector k = wv(0.7, 0.0);
  const double theta = M_PI / 3.0;
  const double fA = beam_at(60).strain_rate();

  const auto rhs = boundary_rhs(k, theta, kFilm.viscosity, fA,
                                kFilm.surface_energy, kFilm.thickness, 1.0);
  CHECK(rhs.surface_tension(0) == Complex(0.0));
  CHECK(rhs.surface_tension(2).real() < 0.0);
  CHECK(rhs.bulk_stress(2) == Complex(0.0));
  CHECK(rhs.total() ==
        rhs.surface_tension + rhs.bulk_stress + rhs.bottom);

  // Without surface tension only the gamma vector changes.
  const auto dry = boundary_rhs(k, theta, kFilm.viscosity, fA, 0.0,
                                kFilm.thickness, 1.0);
  CHECK(dry.surface_tension.norm() == 0.0);
  CHECK((dry.bulk_stress - rhs.bulk_stress).norm() == 0.0);
  CHECK((dry.bottom - rhs.bottom).norm() == 0.0);

  // At normal incidence the bottom contribution vanishes with the shear.
  const auto flat = boundary_rhs(k, 0.0, kFilm.viscosity, fA,
                                 kFilm.surface_energy, kFilm.thickness, 1.0);
  CHECK(flat.bottom.norm() == 0.0);
  CHECK(bottom_constants(0.0, fA, 1.0).C == 0.0);
  CHECK(bottom_constants(theta, fA, 1.0).C ==
        doctest::Approx(-3.0 * fA * std::sin(2.0 * theta)).epsilon(1e-15));
}

TEST_CASE("field profiles satisfy the bulk equations and boundary data") {
  const BeamParameters beam = beam_at(60);
  const Wavevector k = wv(0.8, 0.5);
  const double h0 = kFilm.thickness;
  const double eta = kFilm.viscosity;
  const double fA = beam.strain_rate();
  const double h1 = 1.0;

  const auto bc = bottom_constants(beam.theta, fA, h1);
  const auto rhs = boundary_rhs(k, beam.theta, eta, fA, kFilm.surface_energy,
                                h0, h1);
  const Vector3c dfh =
      solve_coefficients_closed(k, h0, eta, rhs.total());
  ModeCoefficients co;
  co.C = bc.C;
  co.D = dfh(0);
  co.F = dfh(1);
  co.H = dfh(2);
  const FieldProfiles f = evaluate_fields(co, k, eta, h0);

  const Complex i(0.0, 1.0);
  const double r2 = k.k1 * k.k1 + k.k2 * k.k2;
  const double dh = h0 * 1e-4;  // balances roundoff and truncation for d2
  const auto d1 = [&](auto&& g, double z) {
    return (g(z + dh) - g(z - dh)) / (2.0 * dh);
  };
  const auto d2 = [&](auto&& g, double z) {
    return (g(z + dh) - 2.0 * g(z) + g(z - dh)) / (dh * dh);
  };
  const auto pu = [&](double z) { return f.u(z); };
  const auto pv = [&](double z) { return f.v(z); };
  const auto pw = [&](double z) { return f.w(z); };
  const auto pp = [&](double z) { return f.pressure(z); };

  // Finite differences limit the achievable accuracy, so residuals are
  // judged against the magnitude of the terms they cancel.
  for (double zf : {0.2, 0.5, 0.8}) {
    const double z = zf * h0;
    // Momentum: eta (f'' - R^2 f) = grad p.
    const Complex mu = eta * (d2(pu, z) - r2 * f.u(z));
    CHECK(std::abs(mu - i * k.k1 * f.pressure(z)) <= 1e-6 * std::abs(mu));
    const Complex mv = eta * (d2(pv, z) - r2 * f.v(z));
    CHECK(std::abs(mv - i * k.k2 * f.pressure(z)) <= 1e-6 * std::abs(mv));
    const Complex mw = eta * (d2(pw, z) - r2 * f.w(z));
    CHECK(std::abs(mw - d1(pp, z)) <= 1e-6 * std::abs(mw));
    // Continuity.
    const double cmag = std::abs(k.k1 * f.u(z)) + std::abs(k.k2 * f.v(z));
    CHECK(std::abs(i * k.k1 * f.u(z) + i * k.k2 * f.v(z) + d1(pw, z)) <=
          1e-8 * cmag);
  }

  // Translated-bottom no-slip: u picks up the base shear, v and w vanish.
  CHECK(std::abs(f.u(0.0) + 3.0 * fA * std::sin(2.0 * beam.theta) * h1) <=
        1e-12 * fA);
  CHECK(std::abs(f.v(0.0)) <= 1e-12 * fA);
  CHECK(std::abs(f.w(0.0)) <= 1e-12 * fA * h0);

  // Free-surface stress balance, first-order terms only.
  const Complex shear_rhs =
      -6.0 * i * eta * fA * std::cos(2.0 * beam.theta) * k.k1 * h1;
  CHECK(std::abs(eta * (d1(pu, h0) + i * k.k1 * f.w(h0)) - shear_rhs) <=
        1e-8 * std::abs(shear_rhs));
  const Complex normal_rhs = -kFilm.surface_energy * r2 * h1;
  CHECK(std::abs(-f.pressure(h0) + 2.0 * eta * d1(pw, h0) - normal_rhs) <=
        1e-8 * std::abs(normal_rhs));
}

TEST_CASE("pipeline is independent of the mode amplitude") {
  const Wavevector k = wv(0.9, 0.0);
  const Complex base = sigma_pipeline(k, beam_at(70), kFilm).sigma;
  for (double h1 : {1e-12, 1e-3, 4.2}) {
    PipelineOptions opt;
    opt.h1 = h1;
    const Complex s = sigma_pipeline(k, beam_at(70), kFilm, opt).sigma;
    CHECK(std::abs(s - base) <= 1e-11 * std::abs(base));
  }
}

TEST_CASE("flat-bottom diagnostic changes the answer off-normal") {
  const Wavevector k = wv(0.6, 0.0);
  PipelineOptions flat;
  flat.flat_bottom = true;

  const Complex with_bottom = sigma_pipeline(k, beam_at(60), kFilm).sigma;
  const Complex without = sigma_pipeline(k, beam_at(60), kFilm, flat).sigma;
  CHECK(std::abs(with_bottom - without) > 1e-3 * std::abs(with_bottom));

  // At normal incidence the bottom terms vanish and the toggle is inert.
  const Complex a = sigma_pipeline(k, beam_at(0), kFilm).sigma;
  const Complex b = sigma_pipeline(k, beam_at(0), kFilm, flat).sigma;
  CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
}

TEST_CASE("degenerate wavevectors are rejected") {
  CHECK_THROWS_AS(sigma_pipeline({0.0, 0.0}, beam_at(60), kFilm),
                  ValidationError);
  CHECK_THROWS_AS(
      boundary_rhs({0.0, 0.0}, 1.0, 1.0, 1.0, 1.0, kFilm.thickness, 1.0),
      ValidationError);
}
