#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrotor/lg_optics.hpp"
#include "qrotor/units.hpp"

namespace qrotor {

/// Pump/Stokes radio-frequency pulses plus the LG rotation-kicking optical pulse.
struct RamanConfig {
  double B_p0 = 0.0;              // T
  double B_s0 = 0.0;              // T
  double omega_p = 0.0;           // rad/s
  double omega_s = 0.0;           // rad/s
  double Delta_hf = 0.0;          // rad/s, pump detuning from the hyperfine line
  double kick_power_P_e = 0.0;    // W
  std::optional<double> kick_waist_w_e;  // m; derived from the ring-matching condition when unset
  int kick_oam_L = 1;
  double Delta_e = 0.0;           // rad/s, optical detuning (negative = red)
  double polarizability = 0.0;    // C m^2 / V, alpha(omega_e)
  double pulse_duration_tau = 0.0;  // s
  double omega0 = 0.0;            // rad/s, C(r_l)/hbar of the trap rings

  /// Checks signs and the ring-matching condition against the trap beam.
  void validate(const BeamConfig& beam) const;
  /// w_e, explicit or matched so that w_e sqrt(L/2) = w0 sqrt(l/2).
  double kick_waist(const BeamConfig& beam) const;
  /// omega_{2L,0} = 4 L^2 omega0.
  double transition_frequency_2L() const;
};

struct RamanCoupling {
  double V = 0.0;        // J, effective two-photon coupling
  double V_b = 0.0;      // J, magnetic (pump x Stokes) factor
  double V_e = 0.0;      // J, optical kick factor
  double Omega_R = 0.0;  // rad/s, 2 sqrt(2) V / hbar
  std::vector<std::string> warnings;  // violated |Delta_e| >> |Delta_hf| >> omega_{2L,0}
};

/// Ratio at which "much greater than" counts as satisfied.
inline constexpr double kValidityRatio = 10.0;

RamanCoupling effective_coupling(const RamanConfig& cfg, const BeamConfig& beam,
                                 const AtomSpecies& species);

/// H/hbar on {|0>, |2L>, |-2L>}: couplings Omega_R sqrt(2)/4, diagonal (0, -delta, -delta).
Eigen::Matrix3cd rwa_hamiltonian(double delta, double Omega_R);

/// Omega^2/(Omega^2 + delta^2) sin^2(tau/2 sqrt(Omega^2 + delta^2)).
double transition_probability_closed_form(double delta, double Omega_R, double tau);

/// exp(-i H tau)|0> under rwa_hamiltonian.
Eigen::Vector3cd evolve_rwa_state(double delta, double Omega_R, double tau);

/// |<f|Psi(tau)>|^2 with |f> = (|2L> + |-2L>)/sqrt(2).
double evolve_rwa(double delta, double Omega_R, double tau);

}  // namespace qrotor
