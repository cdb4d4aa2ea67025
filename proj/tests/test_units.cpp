#include <cmath>

#include "doctest.h"
#include "qrotor/errors.hpp"
#include "qrotor/units.hpp"

using namespace qrotor;

TEST_SUITE("units") {

TEST_CASE("recoil energy of 6Li at 671 nm") {
  const AtomSpecies li = lithium6();
  const double e0 = recoil_energy(li, 671e-9);
  // Independent arithmetic from h and the atomic mass.
  const double h = 6.62607015e-34;
  const double mass = 6.0151228874 * 1.66053906660e-27;
  const double p = h / 671e-9;
  CHECK(e0 == doctest::Approx(p * p / (2.0 * mass)).epsilon(1e-12));
  CHECK(to_kelvin(e0) * 1e6 == doctest::Approx(3.536).epsilon(5e-3));
  CHECK(to_kelvin(10.0 * e0) * 1e6 == doctest::Approx(35.36).epsilon(5e-3));
}

TEST_CASE("recoil energy scaling") {
  AtomSpecies s = lithium6();
  const double base = recoil_energy(s, 500e-9);
  CHECK(recoil_energy(s, 1000e-9) == doctest::Approx(base / 4.0).epsilon(1e-14));
  CHECK(recoil_energy(s, 1.0) < 1e-40);
  for (double lambda : {300e-9, 671e-9, 1064e-9, 1.5e-6}) {
    for (double mass_factor : {0.5, 1.0, 7.0}) {
      AtomSpecies t = s;
      t.mass = s.mass * mass_factor;
      const double expected = base * std::pow(500e-9 / lambda, 2) / mass_factor;
      CHECK(recoil_energy(t, lambda) == doctest::Approx(expected).epsilon(1e-13));
      CHECK(recoil_energy(t, lambda * 1.01) < recoil_energy(t, lambda));
    }
  }
}

TEST_CASE("recoil energy rejects bad input") {
  CHECK_THROWS_AS(recoil_energy(lithium6(), 0.0), InvalidInput);
  CHECK_THROWS_AS(recoil_energy(lithium6(), -1e-6), InvalidInput);
}

TEST_CASE("species invariants") {
  AtomSpecies s = lithium6();
  CHECK_NOTHROW(s.validate());
  CHECK(s.F_ground == 0.5);
  s.F_ground = 0.7;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s = lithium6();
  s.mass = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s = lithium6();
  s.hyperfine_splitting = -1.0;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
}

TEST_CASE("energy conversions round trip") {
  const double e = 1.234e-30;
  CHECK(from_kelvin(to_kelvin(e)) == doctest::Approx(e).epsilon(1e-15));
  CHECK(from_angular_frequency(to_angular_frequency(e)) == doctest::Approx(e).epsilon(1e-15));
  CHECK(to_angular_frequency(PhysicalConstants::hbar * 21.13) == doctest::Approx(21.13));
}

}
