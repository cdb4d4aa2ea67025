#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qrotor {

struct SensorConfig {
  int kick_oam_L = 25;
  int ring_count_N = 161;          // 2 j_max + 1
  double omega_0 = 21.13;          // rad/s, C(r_l)/hbar
  double Omega_R = 3.142;          // rad/s
  double freq_uncertainty_pump = 0.0;    // rad/s
  double freq_uncertainty_stokes = 0.0;  // rad/s
  double photon_count_pump = 1e29;
  double photon_count_stokes = 1e29;
  double Delta_hf = 1.26e8;        // rad/s
  double distinguishability_threshold = 1.0;

  void validate() const;
};

/// delta_omega = fraction * omega_p, split equally between pump and Stokes.
void apply_fractional_stability(SensorConfig& cfg, double omega_p, double fraction = 2e-18);

/// eps_m(Omega) = hbar (m^2 omega_0 + Omega m), J.
double rotor_energy(int m_ell, double omega_0, double Omega);

/// Frequency of |zeta m> -> |zeta (m + 2L)>, from the energy difference.
double transition_frequency(int m_ell, int zeta, int L, double omega_0, double Omega);

/// 4 L (L + m) omega_0 + 2 zeta L Omega.
double transition_frequency_closed_form(int m_ell, int zeta, int L, double omega_0, double Omega);

/// omega_{m, m+2L}(Omega) - omega_{-m, -m-2L}(Omega); equals 4 L Omega.
double line_splitting(int m_ell, int L, double Omega, double omega_0 = 1.0);

/// omega_{m+mO, m+mO+2L}(Omega - shift) == omega_{m, m+2L}(Omega), shift = 2 mO omega_0 by default.
bool periodicity_check(int m_ell, int m_Omega, int L, double omega_0, double Omega,
                       double rel_tol = 1e-12);
bool periodicity_check(int m_ell, int m_Omega, int L, double omega_0, double Omega,
                       double shift, double rel_tol);

struct RabiFluctuationBudget {
  double dphi = 0.0;          // rad
  double dphi_over_phi = 0.0;
  double deps = 0.0;          // J
  double deps_over_C = 0.0;
  double dOmega = 0.0;        // rad/s
};

struct ShotNoiseBudget {
  double dphi = 0.0;    // rad
  double deps = 0.0;    // J
  double dOmega = 0.0;  // rad/s
};

struct SensorBudget {
  double dOmega_freq = 0.0;
  double dOmega_rabi = 0.0;
  double dOmega_shot = 0.0;
  RabiFluctuationBudget rabi;
  ShotNoiseBudget shot;
};

/// (delta_omega_p + delta_omega_s) / (4 L sqrt(N)).
double budget_frequency(const SensorConfig& cfg);

RabiFluctuationBudget budget_rabi_fluctuation(const SensorConfig& cfg, double C_over_hbar);

ShotNoiseBudget budget_shot_noise(const SensorConfig& cfg);

/// All three channels, reported separately.
SensorBudget sensor_budget(const SensorConfig& cfg);

/// A level splitting Delta_eps (J) is resolvable when Delta_eps / (4 hbar Omega_R)
/// exceeds threshold * delta_phi_omega.
bool splitting_resolvable(const SensorConfig& cfg, double delta_eps);

struct TiltGeometry {
  Eigen::Vector3d gravity_g;
  Eigen::Vector3d acceleration_a;
  Eigen::Vector3d angular_velocity_Omega;
  Eigen::Vector3d effective_gravity;  // g - a
  Eigen::Vector3d rotor_axis;         // e'_z = -(g - a)/|g - a|
  double tilt_angle_theta_a = 0.0;    // rad, angle between g and g - a
  double effective_Omega_prime = 0.0;  // rad/s, Omega . e'_z
};

TiltGeometry tilt_compensation(const Eigen::Vector3d& g, const Eigen::Vector3d& a,
                               const Eigen::Vector3d& Omega);

struct SpectralLine {
  int m_ell = 0;
  int zeta = 1;
  std::string id() const;
};

/// (m, zeta) for m in {0, 1, -1}, zeta in {+1, -1}.
std::vector<SpectralLine> six_lines();

struct RotationScanRow {
  double Omega = 0.0;
  SpectralLine line;
  double frequency = 0.0;
};

std::vector<RotationScanRow> rotation_scan(int L, double omega_0, const std::vector<double>& Omegas);

}  // namespace qrotor
