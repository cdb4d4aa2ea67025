#pragma once

#include <string>

namespace qrotor {

/// CODATA 2018 exact / recommended values, SI.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;      // J s
  static constexpr double k_B = 1.380649e-23;          // J/K
  static constexpr double mu_B = 9.2740100783e-24;     // J/T
  static constexpr double c = 299792458.0;             // m/s
  static constexpr double epsilon_0 = 8.8541878128e-12;  // F/m
  static constexpr double atomic_mass = 1.66053906660e-27;  // kg
};

inline constexpr double kPi = 3.14159265358979323846;

struct AtomSpecies {
  double mass = 0.0;                 // kg
  double g_factor = 0.0;             // hyperfine g_F (magnitude)
  double hyperfine_splitting = 0.0;  // rad/s
  double F_ground = 0.5;             // hyperfine quantum number of the lower manifold
  std::string label;

  /// Throws InvalidInput when an invariant is broken.
  void validate() const;
};

/// 6Li: M = 6.0151228874 u, |g_F| = 2/3 for the F = 1/2 manifold,
/// omega_hf = 1.43e9 s^-1 (the radio-frequency scale used for the pump/Stokes pulses).
AtomSpecies lithium6();

/// hbar^2 (2 pi / lambda)^2 / (2 M).
double recoil_energy(const AtomSpecies& species, double wavelength);

// Energy conversions. All energies are joules internally.
constexpr double to_kelvin(double energy_J) { return energy_J / PhysicalConstants::k_B; }
constexpr double from_kelvin(double temperature_K) { return temperature_K * PhysicalConstants::k_B; }
constexpr double to_angular_frequency(double energy_J) { return energy_J / PhysicalConstants::hbar; }
constexpr double from_angular_frequency(double omega) { return omega * PhysicalConstants::hbar; }

}  // namespace qrotor
