#include <doctest.h>

#include <cmath>

#include "apflow/ebf.hpp"

using namespace apflow;

namespace {

const FilmParameters kFilm{1.0, 1.36, 3e-9};
const BeamParameters kBeam{1e18, 0.25e9 * 1e-18, 0.0};

EBFParameters ebf_defaults() {
  EBFParameters p;
  p.f_E = 0.424e18;  // 0.424 kg/(nm s^2) expressed in N/m^3
  p.d = kFilm.thickness;
  p.eta = kFilm.viscosity;
  return p;
}

}  // namespace

TEST_CASE("ebf steady stress") {
  const auto p = ebf_defaults();

  SUBCASE("linear in depth, zero at the free surface") {
    CHECK(ebf_steady_stress(0.0, 0.5, p).norm() == 0.0);
    const auto half = ebf_steady_stress(-p.d / 2.0, 0.5, p);
    const auto full = ebf_steady_stress(-p.d, 0.5, p);
    CHECK((full - 2.0 * half).norm() <= 1e-12 * full.norm());
  }

  SUBCASE("tensor shape") {
    const double th = 0.7;
    const auto m = ebf_steady_stress(-p.d, th, p);
    CHECK(m(0, 1) == m(1, 0));
    CHECK(m(0, 0) == m(1, 1));
    const double s = p.f_E * std::cos(th) * (-p.d);
    CHECK(m(0, 0) == doctest::Approx(s * std::cos(th)).epsilon(1e-14));
    CHECK(m(0, 1) == doctest::Approx(-s * std::sin(th)).epsilon(1e-14));
  }

  SUBCASE("out-of-range depth rejected") {
    CHECK_THROWS_AS(ebf_steady_stress(0.1, 0.0, p), ValidationError);
    CHECK_THROWS_AS(ebf_steady_stress(-2.0 * p.d, 0.0, p), ValidationError);
  }
}

TEST_CASE("ebf ripple velocity keeps moving at Q = 0") {
  const auto p = ebf_defaults();
  const double v0 = ebf_ripple_velocity(M_PI / 4.0, 0.0, p);
  CHECK(v0 == doctest::Approx(p.d * p.d * p.f_E / (2.0 * p.eta))
                  .epsilon(1e-14));
  CHECK(v0 != 0.0);
  // Quadratic correction with the printed -3/8 coefficient.
  const double v = ebf_ripple_velocity(M_PI / 4.0, 0.4, p);
  CHECK(v == doctest::Approx(v0 * (1.0 - 0.375 * 0.16)).epsilon(1e-14));
  // Vanishes at normal and grazing incidence through sin(2 theta).
  CHECK(ebf_ripple_velocity(0.0, 0.4, p) == 0.0);
}

TEST_CASE("body-force rescaling to the corrected stress measurement") {
  const double fe = rescale_body_force(0.424, 569.0, 1400.0);
  CHECK(fe == doctest::Approx(0.424 * 1400.0 / 569.0).epsilon(1e-15));
  CHECK(fe == doctest::Approx(1.0432337434).epsilon(1e-3));
  CHECK(std::abs(fe - 1.043) < 1e-3);
  CHECK_THROWS_AS(rescale_body_force(1.0, 0.0, 2.0), ValidationError);
}

TEST_CASE("comparison table highlights the qualitative contrasts") {
  const auto p = ebf_defaults();
  std::vector<double> thetas;
  for (double deg = 10.0; deg <= 80.0; deg += 10.0)
    thetas.push_back(deg * M_PI / 180.0);

  SUBCASE("at Q = 0 only the rival model moves") {
    const auto table = comparison_table(thetas, kBeam, kFilm, p, 0.0);
    REQUIRE(table.rows.size() == thetas.size());
    CHECK(table.apf_velocity_vanishes_at_q0);
    CHECK(table.ebf_velocity_nonzero_at_q0);
    CHECK(table.apf_vertical_stress_absent);
    CHECK(table.ebf_vertical_stress_present);
    CHECK(table.ebf_ts_omitted);
    for (const auto& row : table.rows) {
      CHECK(row.v_apf == 0.0);
      CHECK(row.v_ebf != 0.0);
      CHECK(row.t_apf_interface > 0.0);
      CHECK(row.t_ebf_interface > 0.0);
    }
  }

  SUBCASE("at finite Q both velocities are populated") {
    const auto table = comparison_table(thetas, kBeam, kFilm, p, 0.5);
    for (const auto& row : table.rows) {
      CHECK(row.v_apf >= 0.0);
      if (row.theta > 0.01 && row.theta < M_PI / 2.0 - 0.01)
        CHECK(row.v_apf > 0.0);
    }
  }

  SUBCASE("invalid rival parameters rejected") {
    EBFParameters bad = p;
    bad.d = 0.0;
    CHECK_THROWS_AS(comparison_table(thetas, kBeam, kFilm, bad, 0.0),
                    ValidationError);
  }
}
