#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "qrotor/units.hpp"

namespace qrotor {

/// Counter-propagating LG trap beam.
struct BeamConfig {
  double wavelength = 671e-9;  // m
  double waist_w0 = 10e-6;     // m
  double power_P0 = 1.0;       // W; only enters the field amplitude
  int oam_l = 5;
  int radial_p = 0;
  double phase_z0 = 100e-9;    // m, 0 < z0 < lambda/2
  double trap_depth_V0 = 0.0;  // J
  /// Freeze w(z) = w0 (uniform waist between the lenses).
  bool collimated = false;
  /// Replaces the Rayleigh range in w(z) when set; phases always use z_R.
  std::optional<double> divergence_scale_z_eff;

  void validate() const;

  double wavenumber() const;
  double rayleigh_range() const;
  /// Beam radius w(z) (1/e intensity radius).
  double width(double z) const;
  /// w(z) / w0.
  double relative_width(double z) const;
  /// r_l(z) = w(z) sqrt(|l|/2).
  double ring_radius(double z) const;
};

/// Minimum of the trap potential around ring j and its harmonic scales.
struct TrapGeometry {
  int ring_index_j = 0;
  double z_j = 0.0;            // m
  double r_l = 0.0;            // m
  double w_at_zj = 0.0;        // m
  double omega_z = 0.0;        // rad/s
  double b_z = 0.0;            // m
  double omega_r = 0.0;        // rad/s, from the radial curvature at r_l
  double b_r = 0.0;            // m
  double depth_at_ring = 0.0;  // J, negative
};

/// Envelope u_{l,p}(r, phi, z) including Gouy and curvature phases and e^{-i l phi}.
/// Units sqrt(W)/m (sqrt(P0/c)/w prefactor).
std::complex<double> lg_mode_amplitude(const BeamConfig& beam, double r, double phi, double z);

/// Associated Laguerre polynomial L_p^alpha(x) by upward recurrence.
double assoc_laguerre(int p, double alpha, double x);

/// Standing-wave potential for p = 0 (independent of phi).
double optical_potential(const BeamConfig& beam, const AtomSpecies& species, double r, double z);
double optical_potential(const BeamConfig& beam, double r, double z);

std::vector<TrapGeometry> ring_minima(const BeamConfig& beam, const AtomSpecies& species,
                                      int j_first, int j_last);
TrapGeometry ring_minimum(const BeamConfig& beam, const AtomSpecies& species, int j);

/// V_l(r) = V(r, z_j).
class RadialProfile {
 public:
  RadialProfile(BeamConfig beam, double z_j) : beam_(std::move(beam)), z_j_(z_j) {}
  double operator()(double r) const { return optical_potential(beam_, r, z_j_); }
  double z_j() const { return z_j_; }

 private:
  BeamConfig beam_;
  double z_j_;
};

/// W_j(z) = (V0 k^2 / wfrak^2(z_j)) (z - z_j)^2.
class AxialHarmonic {
 public:
  AxialHarmonic(double z_j, double stiffness) : z_j_(z_j), stiffness_(stiffness) {}
  double operator()(double z) const { return stiffness_ * (z - z_j_) * (z - z_j_); }
  double z_j() const { return z_j_; }
  /// Coefficient of (z - z_j)^2, J/m^2.
  double stiffness() const { return stiffness_; }

 private:
  double z_j_;
  double stiffness_;
};

struct HarmonicDecomposition {
  RadialProfile radial;
  AxialHarmonic axial;
};

HarmonicDecomposition harmonic_decomposition(const BeamConfig& beam, int j);

/// V0 from the SI polarizability and the beam power: V0 = 4 alpha |u(r_l, 0, 0)|^2 / eps0,
/// i.e. the cos^2 antinode of the standing wave of two equal counter-propagating beams.
double trap_depth_from_power(const BeamConfig& beam, double polarizability);

}  // namespace qrotor
