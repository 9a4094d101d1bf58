#include <doctest.h>

#include <cmath>

#include "apflow/model_core.hpp"

using namespace apflow;

namespace {
const BeamParameters kBeam{1e18, 0.25e9 * 1e-18, 0.0};  // fA = 0.25e9 / s
const FilmParameters kFilm{1.0, 1.36, 3e-9};
}  // namespace

TEST_CASE("rotation about y") {
  CHECK(rotation_y(0.0).isApprox(Tensor3::Identity(), 1e-15));

  Tensor3 quarter;
  quarter << 0, 0, -1, 0, 1, 0, 1, 0, 0;
  CHECK((rotation_y(M_PI / 2.0) - quarter).cwiseAbs().maxCoeff() < 1e-15);

  const Tensor3 prod = rotation_y(-0.3) * rotation_y(0.3);
  CHECK((prod - Tensor3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("beam strain tensor") {
  Tensor3 d0 = Tensor3::Zero();
  d0.diagonal() << 1.0, 1.0, -2.0;
  CHECK((apf_tensor(0.0) - d0).cwiseAbs().maxCoeff() < 1e-15);

  Tensor3 d90 = Tensor3::Zero();
  d90.diagonal() << -2.0, 1.0, 1.0;
  CHECK((apf_tensor(M_PI / 2.0) - d90).cwiseAbs().maxCoeff() < 1e-14);

  // Closed form at 45 degrees: (3/2)cos(2t)-1/2 etc.
  Tensor3 d45;
  d45 << -0.5, 0.0, 1.5, 0.0, 1.0, 0.0, 1.5, 0.0, -0.5;
  CHECK((apf_tensor(M_PI / 4.0) - d45).cwiseAbs().maxCoeff() < 1e-14);

  // Trace-free and symmetric at every sampled angle.
  for (int i = 0; i <= 90; ++i) {
    const Tensor3 d = apf_tensor(i * M_PI / 180.0);
    CHECK(std::abs(d.trace()) < 1e-14);
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("steady state") {
  const double fA = kBeam.strain_rate();
  const double eta = kFilm.viscosity;

  SUBCASE("normal incidence: biaxial compression, no shear") {
    const SteadyState s = steady_state(kBeam, kFilm);
    CHECK(s.p0 == doctest::Approx(4.0 * eta * fA).epsilon(1e-14));
    CHECK(s.shear_coefficient == 0.0);
    CHECK(s.T0(0, 0) == doctest::Approx(-6.0 * eta * fA).epsilon(1e-14));
    CHECK(s.T0(1, 1) == doctest::Approx(-6.0 * eta * fA).epsilon(1e-14));
    CHECK(s.T0(2, 2) == 0.0);
  }

  SUBCASE("45 degrees maximizes the shear") {
    BeamParameters b = kBeam;
    b.theta = M_PI / 4.0;
    const SteadyState s = steady_state(b, kFilm);
    CHECK(s.shear_coefficient == doctest::Approx(3.0 * fA).epsilon(1e-14));
  }

  SUBCASE("grazing incidence: tensile x-stress") {
    BeamParameters b = kBeam;
    b.theta = M_PI / 2.0;
    const SteadyState s = steady_state(b, kFilm);
    CHECK(s.p0 == doctest::Approx(-2.0 * eta * fA).epsilon(1e-14));
    CHECK(std::abs(s.shear_coefficient) < 3.0 * fA * 1e-15);
    CHECK(s.T0(0, 0) == doctest::Approx(6.0 * eta * fA).epsilon(1e-13));
    CHECK(std::abs(s.T0(1, 1)) < 6.0 * eta * fA * 1e-14);
  }

  SUBCASE("z row and column vanish; p0 decreasing; shear peaked at 45") {
    double prev_p0 = std::numeric_limits<double>::infinity();
    BeamParameters b = kBeam;
    for (int i = 0; i <= 90; ++i) {
      b.theta = i * M_PI / 180.0;
      const SteadyState s = steady_state(b, kFilm);
      CHECK(s.T0.row(2).norm() == 0.0);
      CHECK(s.T0.col(2).norm() == 0.0);
      CHECK(s.T0(0, 1) == 0.0);
      CHECK(s.p0 < prev_p0);
      prev_p0 = s.p0;
      const double c45 = 3.0 * fA;
      CHECK(s.shear_coefficient <= c45 * (1.0 + 1e-15));
    }
  }
}

TEST_CASE("stress magnitude and its inverse") {
  CHECK(stress_magnitude_at_normal(kBeam, kFilm) ==
        doctest::Approx(1.5e9).epsilon(1e-14));

  BeamParameters off = kBeam;
  off.flux = 0.0;
  CHECK(stress_magnitude_at_normal(off, kFilm) == 0.0);

  CHECK(infer_eta_fA_from_stress(1.5e9) ==
        doctest::Approx(0.25e9).epsilon(1e-14));
  CHECK(infer_eta_fA_from_stress(0.0) == 0.0);
  CHECK(infer_eta_fA_from_stress(1.4e9) ==
        doctest::Approx(1.4e9 / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(infer_eta_fA_from_stress(-1.0), ValidationError);

  // Round trip.
  const double t0 = stress_magnitude_at_normal(kBeam, kFilm);
  CHECK(infer_eta_fA_from_stress(t0) ==
        doctest::Approx(kFilm.viscosity * kBeam.strain_rate())
            .epsilon(1e-15));
}

TEST_CASE("surface tension number") {
  // 6 * 1.36 / (1.5e9 * 3e-9)
  CHECK(surface_tension_number(kBeam, kFilm).S ==
        doctest::Approx(1.813333333333).epsilon(1e-12));

  FilmParameters dry = kFilm;
  dry.surface_energy = 0.0;
  CHECK(surface_tension_number(kBeam, dry).S == 0.0);

  BeamParameters doubled = kBeam;
  doubled.flux *= 2.0;
  CHECK(surface_tension_number(doubled, kFilm).S ==
        doctest::Approx(0.5 * surface_tension_number(kBeam, kFilm).S)
            .epsilon(1e-15));

  BeamParameters off = kBeam;
  off.flux = 0.0;
  CHECK_THROWS_AS(surface_tension_number(off, kFilm), ValidationError);
}

TEST_CASE("parameter validation") {
  BeamParameters bad = kBeam;
  bad.theta = -0.1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = kBeam;
  bad.flux = -1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  FilmParameters thin = kFilm;
  thin.thickness = 0.0;
  CHECK_THROWS_AS(thin.validate(), ValidationError);
}
