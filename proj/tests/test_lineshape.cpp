#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qrotor/errors.hpp"
#include "qrotor/lineshape.hpp"

using namespace qrotor;

namespace {

constexpr double kOmega = 3.142;
const double kTau = kPi / kOmega;

std::vector<double> grid_in_omega(double lo, double hi, std::size_t n) {
  auto g = linear_grid(lo * kOmega, hi * kOmega, n);
  return g;
}

// Left minus right half width at half maximum, measured from the peak sample.
double half_width_asymmetry(const Lineshape& ls) {
  const auto& p = ls.probability;
  const auto peak = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  const double half = 0.5 * p[peak];
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && p[lo] > half) --lo;
  while (hi + 1 < p.size() && p[hi] > half) ++hi;
  return (ls.delta_grid[peak] - ls.delta_grid[lo]) - (ls.delta_grid[hi] - ls.delta_grid[peak]);
}

BeamConfig trap_beam() {
  BeamConfig b;
  b.waist_w0 = 10e-6;
  b.oam_l = 5;
  b.trap_depth_V0 = 10.0 * recoil_energy(lithium6(), b.wavelength);
  return b;
}

}  // namespace

TEST_SUITE("lineshape") {

TEST_CASE("shift models") {
  CHECK(ShiftModel::parse("quadratic") == ShiftModel::Kind::quadratic);
  CHECK(ShiftModel::name(ShiftModel::Kind::as_printed) == "as_printed");
  CHECK_THROWS_AS(ShiftModel::parse("cubic"), InvalidInput);

  const auto q = ring_detuning_shifts({ShiftModel::Kind::quadratic, 0.01}, 3);
  REQUIRE(q.size() == 7);
  for (int j = -3; j <= 3; ++j) CHECK(q[j + 3] == doctest::Approx(0.01 * j * j));
  for (double s : ring_detuning_shifts({ShiftModel::Kind::none, 0.0}, 5)) CHECK(s == 0.0);
  CHECK_THROWS_AS(ring_detuning_shifts({ShiftModel::Kind::physical, 0.0}, 2), InvalidInput);
  CHECK_THROWS_AS(ring_detuning_shifts({ShiftModel::Kind::quadratic, -1.0}, 2), InvalidInput);

  const BeamConfig b = trap_beam();
  const AtomSpecies li = lithium6();
  const auto phys = ring_detuning_shifts({ShiftModel::Kind::physical, 0.0}, b, li, 1, 10);
  const auto printed = ring_detuning_shifts({ShiftModel::Kind::as_printed, 0.0}, b, li, 1, 10);
  CHECK(phys[10] == 0.0);
  for (int j = -10; j <= 10; ++j) {
    CHECK(phys[j + 10] >= 0.0);
    CHECK(printed[j + 10] == doctest::Approx(phys[j + 10] * j * j));
  }
  // Small-z expansion: omega0(z) ~ omega0(0) (1 - (z/z_R)^2).
  const double z = kPi * 10 / b.wavenumber() + b.phase_z0;
  const double w0 = ring_rotational_frequency(b, li, 0.0);
  CHECK(ring_rotational_frequency(b, li, z) ==
        doctest::Approx(w0 / (1.0 + std::pow(z / b.rayleigh_range(), 2))).epsilon(1e-12));
}

TEST_CASE("single ring and zero shifts reduce to P0") {
  const auto grid = grid_in_omega(-6.0, 6.0, 301);
  const auto single = ensemble_lineshape(ring_detuning_shifts({ShiftModel::Kind::quadratic, 0.3}, 0), kOmega,
                                         kTau, grid);
  const auto flat = ensemble_lineshape(ring_detuning_shifts({ShiftModel::Kind::none, 0.0}, 40), kOmega,
                                       kTau, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p0 = transition_probability_closed_form(grid[i], kOmega, kTau);
    CHECK(single.probability[i] == doctest::Approx(p0).epsilon(1e-15));
    CHECK(flat.probability[i] == doctest::Approx(p0).epsilon(1e-13));
  }
  CHECK(flat.j_max == 40);
}

TEST_CASE("ensemble probabilities are bounded and deterministic under parallelism") {
  const auto shifts = ring_detuning_shifts({ShiftModel::Kind::quadratic, 3.5e-4 * kOmega}, 80);
  const auto grid = grid_in_omega(-8.0, 6.0, 1401);
  const auto serial = ensemble_lineshape(shifts, kOmega, kTau, grid, 1);
  const auto threaded = ensemble_lineshape(shifts, kOmega, kTau, grid, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(serial.probability[i] >= 0.0);
    CHECK(serial.probability[i] <= 1.0);
    CHECK(serial.probability[i] == threaded.probability[i]);
  }
  CHECK_THROWS_AS(ensemble_lineshape(std::vector<double>(4, 0.0), kOmega, kTau, grid), InvalidInput);
  CHECK_THROWS_AS(ensemble_lineshape(shifts, kOmega, kTau, {0.0, 0.0}), InvalidInput);
}

TEST_CASE("skew follows the sign of the shifts") {
  const auto grid = grid_in_omega(-14.0, 14.0, 2001);
  auto shifts = ring_detuning_shifts({ShiftModel::Kind::quadratic, 5e-4 * kOmega}, 80);
  const auto positive = ensemble_lineshape(shifts, kOmega, kTau, grid);
  for (double& s : shifts) s = -s;
  const auto negative = ensemble_lineshape(shifts, kOmega, kTau, grid);
  // Rings with positive shifts resonate at negative delta, so the long side is on the left.
  const double step = grid[1] - grid[0];
  CHECK(half_width_asymmetry(positive) > 5.0 * step);
  CHECK(half_width_asymmetry(negative) < -5.0 * step);
  const auto flat = ensemble_lineshape(ring_detuning_shifts({ShiftModel::Kind::none, 0.0}, 80), kOmega,
                                       kTau, grid);
  CHECK(std::abs(half_width_asymmetry(flat)) <= step);
}

TEST_CASE("self-fit recovers the generating parameters") {
  const auto grid = grid_in_omega(-8.0, 8.0, 801);
  const auto ls = ensemble_lineshape(std::vector<double>{0.0}, kOmega, kTau, grid);
  for (FitModel model : {FitModel::PiPulse, FitModel::FixedDuration}) {
    const FitResult f = fit_lineshape(ls, model);
    CHECK(f.amplitude_A == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(f.delta_0) < 1e-6 * kOmega);
    CHECK(f.Omega_R_eff == doctest::Approx(kOmega).epsilon(1e-6));
    CHECK(f.rms_residual < 1e-8);
  }
}

TEST_CASE("fit recovers a scaled and shifted P0") {
  const auto grid = grid_in_omega(-8.0, 8.0, 801);
  Lineshape ls;
  ls.delta_grid = grid;
  ls.Omega_R = kOmega;
  ls.tau = kTau;
  const double w = 1.3 * kOmega, d0 = -0.4 * kOmega;
  for (double d : grid) ls.probability.push_back(0.7 * transition_probability_closed_form(d - d0, w, kPi / w));
  const FitResult f = fit_lineshape(ls);
  CHECK(f.amplitude_A == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(f.delta_0 == doctest::Approx(d0).epsilon(1e-6));
  CHECK(f.Omega_R_eff == doctest::Approx(w).epsilon(1e-6));
}

TEST_CASE("fitted width grows with the shift scale") {
  const auto grid = grid_in_omega(-12.0, 6.0, 1201);
  double previous = 0.0;
  for (double s : {0.0, 0.5e-4, 1e-4, 2e-4, 3.5e-4, 5e-4}) {
    const auto shifts = ring_detuning_shifts({ShiftModel::Kind::quadratic, s * kOmega}, 80);
    const FitResult f = fit_lineshape(ensemble_lineshape(shifts, kOmega, kTau, grid, 2));
    CHECK(f.Omega_R_eff >= previous * (1.0 - 1e-9));
    previous = f.Omega_R_eff;
  }
  CHECK(previous > 1.2 * kOmega);
}

TEST_CASE("broadened curve peaks away from the fitted centre") {
  const auto shifts = ring_detuning_shifts({ShiftModel::Kind::quadratic, 3.5e-4 * kOmega}, 80);
  const auto ls = ensemble_lineshape(shifts, kOmega, kTau, grid_in_omega(-8.0, 6.0, 1401));
  const Peak p = locate_peak(shifts, kOmega, kTau, -8.0 * kOmega, 6.0 * kOmega);
  const FitResult f = fit_lineshape(ls);
  CHECK(p.delta_max < 0.0);
  CHECK(std::abs(f.delta_0 - p.delta_max) > 0.05 * kOmega);
  CHECK(p.P_max == doctest::Approx(*std::max_element(ls.probability.begin(), ls.probability.end())).epsilon(1e-4));
}

TEST_CASE("quadratic calibration") {
  const auto reachable = calibrate_quadratic_scale(kOmega, kTau, 80, -0.3 * kOmega);
  CHECK(reachable.exact);
  CHECK(reachable.peak.delta_max == doctest::Approx(-0.3 * kOmega).epsilon(1e-6));
  const auto shifts = ring_detuning_shifts({ShiftModel::Kind::quadratic, reachable.scale_s}, 80);
  CHECK(locate_peak(shifts, kOmega, kTau, -8.0 * kOmega, 6.0 * kOmega).delta_max ==
        doctest::Approx(reachable.peak.delta_max).epsilon(1e-6));

  // The one-parameter model cannot push its peak arbitrarily far out.
  const auto far = calibrate_quadratic_scale(kOmega, kTau, 80, -5.0 * kOmega);
  CHECK_FALSE(far.exact);
  CHECK(far.peak.delta_max > -5.0 * kOmega);
  CHECK_THROWS_AS(calibrate_quadratic_scale(kOmega, kTau, 0, -0.3 * kOmega), InvalidInput);
}

TEST_CASE("full width at half maximum of a triangle") {
  const auto tri = [](double x) { return std::max(0.0, 1.0 - std::abs(x)); };
  CHECK(full_width_half_maximum(tri, 0.0, 0.013) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(full_width_half_maximum(tri, 0.0, 0.0), InvalidInput);
}

TEST_CASE("fit preconditions and failure") {
  Lineshape few;
  few.delta_grid = grid_in_omega(-8.0, 8.0, 20);
  few.probability.assign(20, 0.1);
  few.Omega_R = kOmega;
  CHECK_THROWS_AS(fit_lineshape(few), InvalidInput);

  Lineshape narrow = ensemble_lineshape(std::vector<double>{0.0}, kOmega, kTau, grid_in_omega(-2.0, 2.0, 100));
  CHECK_THROWS_AS(fit_lineshape(narrow), InvalidInput);

  // A negative baseline drives A below zero, which is not an admissible fit.
  Lineshape inverted = ensemble_lineshape(std::vector<double>{0.0}, kOmega, kTau, grid_in_omega(-8.0, 8.0, 401));
  for (double& p : inverted.probability) p = -0.5 + 0.01 * p;
  try {
    fit_lineshape(inverted);
    FAIL("expected FitFailure");
  } catch (const FitFailure& e) {
    CHECK(std::isfinite(e.best_so_far().rms_residual));
  }
}

}
