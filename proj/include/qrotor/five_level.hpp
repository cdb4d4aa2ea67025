#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "qrotor/lg_optics.hpp"
#include "qrotor/raman.hpp"
#include "qrotor/units.hpp"

namespace qrotor {

using Matrix5cd = Eigen::Matrix<std::complex<double>, 5, 5>;
using Vector5cd = Eigen::Matrix<std::complex<double>, 5, 1>;

/// Ladder |0> = (F=1/2, m=0), |1> = (F=1/2, +-2L symmetric), |2>, |3> the F=3/2
/// partners (frame rotating at omega_p), |4> the excited +-L symmetric state
/// (frame rotating at omega_e). Frame energies are -hbar Delta for detuned states.
/// Everything is stored as H/hbar in rad/s.
struct FiveLevelModel {
  Eigen::Matrix<double, 5, 1> diagonal;  // (0, w2L, -Delta_hf, -Delta_hf + w2L, -Delta_e)
  double pump = 0.0;         // <0|H_p|2> = <1|H_p|3>
  double stokes = 0.0;       // <0|H_s|2> e^{-i(omega_s - omega_p)t}
  double electric = 0.0;     // <0|H_e|4> = <1|H_e|4> = sqrt(2) h_e
  double omega_ps = 0.0;     // omega_p - omega_s

  Matrix5cd hamiltonian(double t) const;
};

/// Magnetic matrix-element factor for F = 1/2 -> 3/2 at projection m_F, normalized
/// so that eliminating both intermediate states reproduces Omega_R = 2 sqrt(2) V / hbar.
double magnetic_coupling_factor(double m_F);

FiveLevelModel five_level_model(const RamanConfig& cfg, const BeamConfig& beam,
                                const AtomSpecies& species, double m_F = 0.5);

/// Two-level result of eliminating the F = 3/2 and excited states.
struct EffectiveTwoLevel {
  Eigen::Matrix2d hamiltonian;  // J, [[0, static_coupling], [static_coupling, eps_2L]]
  double stark_coupling = 0.0;  // J, 2|h_e|^2/(hbar Delta_e) with no magnetic dressing
  double static_coupling = 0.0;  // J, time-independent part including magnetic dressing
  double cos_amplitude_symmetric = 0.0;  // J, coefficient of cos(omega_ps t) between |0> and |1>
  double cos_amplitude_component = 0.0;  // J, same per |+-2L> component (= 2 V)
  double v_b = 0.0;  // peak |v_b|
  double v_e = 0.0;  // |v_e|
  double resonance_frequency = 0.0;  // rad/s, dressed |0>-|1> splitting
  double predicted_rabi = 0.0;       // rad/s, Omega_R times the dressed-basis projection
};

/// Largest |v_b| and |v_e| for which elimination is accepted.
inline constexpr double kPerturbativeLimit = 0.1;

/// Throws ValidityError (carrying the offending ratio) when |v_b| or |v_e| exceeds the limit.
EffectiveTwoLevel adiabatic_eliminate(const RamanConfig& cfg, const BeamConfig& beam,
                                      const AtomSpecies& species, double m_F = 0.5);

/// Called after every step with (t, psi).
using StateObserver = std::function<void(double, const Vector5cd&)>;

/// Fourth-order commutator-free Magnus propagation with fixed step; each exponential
/// is taken exactly from the Hermitian eigendecomposition.
Vector5cd propagate_magnus(const FiveLevelModel& model, Vector5cd psi, double t0, double t1,
                           std::size_t steps, const StateObserver& observer = {});

/// Adaptive Dormand-Prince 5(4).
Vector5cd propagate_rk45(const FiveLevelModel& model, Vector5cd psi, double t0, double t1,
                         double rel_tol = 1e-10, double abs_tol = 1e-12);

struct RabiMeasurement {
  double omega = 0.0;   // rad/s, pi / t_peak
  double t_peak = 0.0;  // s, first maximum of the |1> population
  double p_peak = 0.0;
};

/// Starts in |0>, integrates to 1.5 pi / omega_guess and locates the first |1> population maximum.
RabiMeasurement measure_rabi_frequency(const FiveLevelModel& model, double omega_guess,
                                       std::size_t steps_per_drive_period = 64);

}  // namespace qrotor
