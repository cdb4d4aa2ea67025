#include "qrotor/units.hpp"

#include <cmath>

#include "qrotor/errors.hpp"

namespace qrotor {

void AtomSpecies::validate() const {
  if (!(mass > 0.0)) throw InvalidInput("species.mass must be > 0");
  if (!(hyperfine_splitting > 0.0)) throw InvalidInput("species.hyperfine_splitting must be > 0");
  const double twice_f = 2.0 * F_ground;
  if (!(F_ground > 0.0) || std::abs(twice_f - std::round(twice_f)) > 1e-12)
    throw InvalidInput("species.F_ground must be a positive multiple of 1/2");
}

AtomSpecies lithium6() {
  AtomSpecies s;
  s.mass = 6.0151228874 * PhysicalConstants::atomic_mass;
  s.g_factor = 2.0 / 3.0;
  s.hyperfine_splitting = 1.43e9;
  s.F_ground = 0.5;
  s.label = "6Li";
  return s;
}

double recoil_energy(const AtomSpecies& species, double wavelength) {
  if (!(wavelength > 0.0)) throw InvalidInput("recoil_energy: wavelength must be > 0");
  if (!(species.mass > 0.0)) throw InvalidInput("recoil_energy: mass must be > 0");
  const double k = 2.0 * kPi / wavelength;
  const double hbar = PhysicalConstants::hbar;
  return hbar * hbar * k * k / (2.0 * species.mass);
}

}  // namespace qrotor
