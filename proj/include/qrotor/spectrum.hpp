#pragma once

#include <vector>

#include "qrotor/lg_optics.hpp"
#include "qrotor/tridiagonal.hpp"
#include "qrotor/units.hpp"

namespace qrotor {

struct QuantumNumbers {
  int n_z = 0;
  int n_r = 0;
  int m_ell = 0;
  double m_F = 0.5;  // representative projection; the level's degeneracy covers all m_F
};

struct EnergyLevel {
  QuantumNumbers qn;
  double energy = 0.0;  // J, relative to the (0,0,0) level
  int degeneracy = 1;
};

struct ExcitationGaps {
  double eps_z = 0.0;    // eps_z(1) - eps_z(0)
  double eps_r = 0.0;    // eps_r(1,0) - eps_r(0,0)
  double eps_ell = 0.0;  // eps_r(0,1) - eps_r(0,0)
};

struct RotorSpectrum {
  std::vector<EnergyLevel> levels;  // ascending in energy
  ExcitationGaps gaps;
  bool inequalities_ok = false;
  double ratio_z_over_r = 0.0;
  double ratio_r_over_ell = 0.0;
};

struct SpectrumLimits {
  int n_z_max = 1;
  int n_r_max = 2;
  int m_ell_max = 10;
  int ring_index = 0;
  double ratio_threshold = 10.0;
  int axial_points = 1500;
  int radial_points = 1500;
  double axial_box_lengths = 6.0;   // half-width in b_z
  double radial_box_lengths = 8.0;  // half-width in b_r
  unsigned parallelism = 1;
};

/// C(r) = hbar^2 / (2 M r^2).
double rotational_constant(double r, const AtomSpecies& species);

struct AxialSolution {
  std::vector<double> energies;  // J, absolute (W_j(z_j) = 0)
  BoundStates1D detail;
};

struct RadialSolution {
  std::vector<double> energies;  // J, absolute
  BoundStates1D detail;          // in chi = sqrt(r) psi; detail.grid is r
};

AxialSolution solve_axial(const BeamConfig& beam, const AtomSpecies& species, int j, int n_z_max,
                          const SpectrumLimits& limits = {}, bool want_states = false);

/// Radial equation with V_l(r) + m^2 C(r), solved for chi = sqrt(r) psi with the
/// effective potential V_l + (m^2 - 1/4) hbar^2 / (2 M r^2).
RadialSolution solve_radial(const BeamConfig& beam, const AtomSpecies& species, int j, int m_ell,
                            int n_r_max, const SpectrumLimits& limits = {},
                            bool want_states = false);

/// Same as solve_radial but with V_l replaced by its quadratic expansion about r_l.
RadialSolution solve_radial_harmonic(const BeamConfig& beam, const AtomSpecies& species, int j,
                                     int m_ell, int n_r_max, const SpectrumLimits& limits = {});

RotorSpectrum assemble_spectrum(const BeamConfig& beam, const AtomSpecies& species,
                                const SpectrumLimits& limits);

/// eps + hbar Omega m_ell.
double rotating_frame_energy(const EnergyLevel& level, double Omega);

int level_degeneracy(int m_ell, double F_ground);

}  // namespace qrotor
