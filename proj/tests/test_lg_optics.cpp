#include <cmath>

#include "doctest.h"
#include "qrotor/errors.hpp"
#include "qrotor/lg_optics.hpp"

using namespace qrotor;

namespace {

BeamConfig fig2_beam() {
  BeamConfig b;
  b.wavelength = 671e-9;
  b.waist_w0 = 10e-6;
  b.oam_l = 5;
  b.radial_p = 0;
  b.phase_z0 = 100e-9;
  b.trap_depth_V0 = 10.0 * recoil_energy(lithium6(), b.wavelength);
  return b;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_SUITE("lg_optics") {

TEST_CASE("beam width follows the Gaussian-beam law") {
  BeamConfig b = fig2_beam();
  const double zr = kPi * b.waist_w0 * b.waist_w0 / b.wavelength;
  CHECK(b.rayleigh_range() == doctest::Approx(zr));
  CHECK(b.width(0.0) == doctest::Approx(b.waist_w0));
  CHECK(b.width(zr) == doctest::Approx(std::sqrt(2.0) * b.waist_w0).epsilon(1e-14));
  CHECK(b.width(3.0 * zr) == doctest::Approx(std::sqrt(10.0) * b.waist_w0).epsilon(1e-14));
  b.divergence_scale_z_eff = 1e-3;
  CHECK(b.width(1e-3) == doctest::Approx(std::sqrt(2.0) * b.waist_w0).epsilon(1e-14));
  b.collimated = true;
  CHECK(b.width(1.0) == b.waist_w0);
}

TEST_CASE("associated Laguerre recurrence matches explicit polynomials") {
  for (double a : {0.0, 1.0, 5.0, 2.5}) {
    for (double x : {0.0, 0.3, 1.7, 6.0}) {
      CHECK(assoc_laguerre(0, a, x) == 1.0);
      CHECK(assoc_laguerre(1, a, x) == doctest::Approx(1.0 + a - x));
      const double l2 = (x * x - 2.0 * (a + 2.0) * x + (a + 1.0) * (a + 2.0)) / 2.0;
      CHECK(assoc_laguerre(2, a, x) == doctest::Approx(l2).epsilon(1e-13));
      const double l3 = (-x * x * x + 3.0 * (a + 3.0) * x * x - 3.0 * (a + 2.0) * (a + 3.0) * x +
                         (a + 1.0) * (a + 2.0) * (a + 3.0)) /
                        6.0;
      CHECK(assoc_laguerre(3, a, x) == doctest::Approx(l3).epsilon(1e-12));
    }
  }
}

TEST_CASE("mode amplitude: axis null, phi independence, ring maximum") {
  const BeamConfig b = fig2_beam();
  CHECK(std::abs(lg_mode_amplitude(b, 0.0, 0.3, 0.0)) == 0.0);
  for (double z : {0.0, 2e-4, -1e-3}) {
    const double ref = std::abs(lg_mode_amplitude(b, 12e-6, 0.0, z));
    for (double phi : {0.5, 1.9, -2.7, 6.0})
      CHECK(std::abs(lg_mode_amplitude(b, 12e-6, phi, z)) == doctest::Approx(ref).epsilon(1e-14));
  }
  double best_r = 0.0, best = -1.0;
  for (int i = 0; i <= 400000; ++i) {
    const double r = 40e-6 * i / 400000.0;
    const double a = std::abs(lg_mode_amplitude(b, r, 0.0, 0.0));
    if (a > best) {
      best = a;
      best_r = r;
    }
  }
  CHECK(best_r * 1e6 == doctest::Approx(15.81).epsilon(0.01 / 15.81));
}

TEST_CASE("mode is normalized to P0/c over the transverse plane") {
  for (int p : {0, 1, 2}) {
    BeamConfig b = fig2_beam();
    b.radial_p = p;
    b.power_P0 = 2.5;
    for (double z : {0.0, b.rayleigh_range()}) {
      // Trapezoid on a fine grid; the integrand vanishes at both ends.
      const int n = 200000;
      const double r_max = 8.0 * b.width(z);
      const double h = r_max / n;
      double sum = 0.0;
      for (int i = 1; i < n; ++i) {
        const double r = i * h;
        sum += std::norm(lg_mode_amplitude(b, r, 0.0, z)) * 2.0 * kPi * r;
      }
      CHECK(sum * h == doctest::Approx(b.power_P0 / PhysicalConstants::c).epsilon(1e-9));
    }
  }
}

TEST_CASE("optical potential special points") {
  const BeamConfig b = fig2_beam();
  const AtomSpecies li = lithium6();
  const double v0 = b.trap_depth_V0;
  for (int j : {0, 3, -40}) {
    const TrapGeometry g = ring_minimum(b, li, j);
    const double wf = b.width(g.z_j) / b.waist_w0;
    CHECK(optical_potential(b, g.r_l, g.z_j) == doctest::Approx(-v0 / (wf * wf)).epsilon(1e-14));
    CHECK(g.depth_at_ring == doctest::Approx(-v0 / (wf * wf)).epsilon(1e-14));
  }
  const double node = b.phase_z0 + b.wavelength / 4.0;
  CHECK(std::abs(optical_potential(b, 15e-6, node)) < 1e-12 * v0);
  CHECK(optical_potential(b, 0.0, b.phase_z0) == 0.0);

  BeamConfig p1 = b;
  p1.radial_p = 1;
  CHECK_THROWS_AS(optical_potential(p1, 1e-6, 0.0), UnsupportedMode);
  CHECK_THROWS_AS(harmonic_decomposition(p1, 0), UnsupportedMode);
}

TEST_CASE("ring minima: geometry and stationarity") {
  const BeamConfig b = fig2_beam();
  const AtomSpecies li = lithium6();
  const auto rings = ring_minima(b, li, -2, 2);
  REQUIRE(rings.size() == 5);
  const double k = b.wavenumber();
  for (const auto& g : rings) {
    CHECK(g.z_j == doctest::Approx(kPi * g.ring_index_j / k + b.phase_z0));
    CHECK(g.r_l == doctest::Approx(b.width(g.z_j) * std::sqrt(2.5)).epsilon(1e-15));
    CHECK(g.omega_z > 0.0);
    CHECK(g.b_z > 0.0);
    CHECK(g.depth_at_ring < 0.0);
    const double hr = 1e-4 * g.r_l, hz = 1e-4 / k;
    const double dr = (optical_potential(b, g.r_l + hr, g.z_j) - optical_potential(b, g.r_l - hr, g.z_j)) / (2 * hr);
    const double dz = (optical_potential(b, g.r_l, g.z_j + hz) - optical_potential(b, g.r_l, g.z_j - hz)) / (2 * hz);
    // Compare with the natural gradient scales V0/r_l and V0 k.
    CHECK(std::abs(dr) * g.r_l / b.trap_depth_V0 < 1e-6);
    CHECK(std::abs(dz) / (k * b.trap_depth_V0) < 1e-6);
  }
  const TrapGeometry g0 = rings[2];
  CHECK(g0.r_l * 1e6 == doctest::Approx(15.811).epsilon(1e-4));
  const double e0 = recoil_energy(li, b.wavelength);
  CHECK(PhysicalConstants::hbar * g0.omega_z == doctest::Approx(2.0 * std::sqrt(10.0) * e0).epsilon(1e-12));
  CHECK(to_kelvin(PhysicalConstants::hbar * g0.omega_z) * 1e6 == doctest::Approx(22.36).epsilon(1e-3));
}

TEST_CASE("harmonic decomposition") {
  const BeamConfig b = fig2_beam();
  const AtomSpecies li = lithium6();
  for (int j : {0, 5}) {
    const TrapGeometry g = ring_minimum(b, li, j);
    const auto h = harmonic_decomposition(b, j);
    const double wf = b.width(g.z_j) / b.waist_w0;
    CHECK(h.radial(g.r_l) == doctest::Approx(-b.trap_depth_V0 / (wf * wf)));
    CHECK(h.axial(g.z_j) == 0.0);
    CHECK(h.axial(g.z_j + 3e-8) == doctest::Approx(h.axial(g.z_j - 3e-8)).epsilon(1e-12));
    // Harmonic-limit oracle: sqrt(W''/M) = omega_z.
    CHECK(std::sqrt(2.0 * h.axial.stiffness() / li.mass) == doctest::Approx(g.omega_z).epsilon(1e-12));

    // Radial curvature by Richardson-extrapolated central differences.
    const auto d2 = [&](double step) {
      return (h.radial(g.r_l + step) - 2.0 * h.radial(g.r_l) + h.radial(g.r_l - step)) / (step * step);
    };
    const double s = 1e-3 * g.r_l;
    const double curvature = (4.0 * d2(s / 2.0) - d2(s)) / 3.0;
    const double expected = 4.0 * b.oam_l * b.trap_depth_V0 / (wf * wf * g.r_l * g.r_l);
    CHECK(curvature == doctest::Approx(expected).epsilon(1e-6));
    CHECK(g.omega_r == doctest::Approx(std::sqrt(expected / li.mass)).epsilon(1e-14));
  }
}

TEST_CASE("radial frequency is independent of l at j = 0") {
  const AtomSpecies li = lithium6();
  BeamConfig b = fig2_beam();
  const double expected = std::sqrt(8.0 * b.trap_depth_V0 / (li.mass * b.waist_w0 * b.waist_w0));
  // With z0 > 0 the ring at j = 0 sits slightly off the waist; freeze w(z) for the identity.
  b.collimated = true;
  for (int l = 1; l <= 50; ++l) {
    b.oam_l = l;
    CHECK(ring_minimum(b, li, 0).omega_r == doctest::Approx(expected).epsilon(1e-13));
  }
  CHECK(to_kelvin(PhysicalConstants::hbar * expected) * 1e6 == doctest::Approx(0.4776).epsilon(5e-3));
}

TEST_CASE("collimated potential is periodic in z") {
  BeamConfig b = fig2_beam();
  b.collimated = true;
  const double period = kPi / b.wavenumber();
  for (double r : {5e-6, 15.8e-6, 30e-6})
    for (double z : {0.0, 1e-7, 2.3e-7})
      CHECK(optical_potential(b, r, z + period) ==
            doctest::Approx(optical_potential(b, r, z)).epsilon(1e-9));
}

TEST_CASE("trap depth from power") {
  BeamConfig b = fig2_beam();
  b.power_P0 = 0.3;
  const double alpha = 2.7e-39;
  const int l = b.oam_l;
  const double u2 = 2.0 / (kPi * factorial(l)) * (b.power_P0 / PhysicalConstants::c) *
                    std::pow(l, l) * std::exp(-l) / (b.waist_w0 * b.waist_w0);
  CHECK(trap_depth_from_power(b, alpha) ==
        doctest::Approx(4.0 * alpha * u2 / PhysicalConstants::epsilon_0).epsilon(1e-12));
}

TEST_CASE("beam validation") {
  BeamConfig b = fig2_beam();
  CHECK_NOTHROW(b.validate());
  b.phase_z0 = b.wavelength;
  CHECK_THROWS_AS(b.validate(), InvalidInput);
  b.phase_z0 = 0.0;
  CHECK_THROWS_AS(b.validate(), InvalidInput);
  b = fig2_beam();
  b.waist_w0 = -1.0;
  CHECK_THROWS_AS(b.validate(), InvalidInput);
  CHECK_THROWS_AS(lg_mode_amplitude(fig2_beam(), -1e-6, 0.0, 0.0), InvalidInput);
}

}
