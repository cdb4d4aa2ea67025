#include "qrotor/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qrotor/errors.hpp"
#include "qrotor/units.hpp"

namespace qrotor {

void SensorConfig::validate() const {
  if (kick_oam_L < 1) throw InvalidInput("sensor.kick_oam_L must be >= 1");
  if (ring_count_N < 1 || ring_count_N % 2 == 0)
    throw InvalidInput("sensor.ring_count_N must be a positive odd integer");
  if (!(omega_0 > 0.0)) throw InvalidInput("sensor.omega_0 must be > 0");
  if (!(Omega_R > 0.0)) throw InvalidInput("sensor.Omega_R must be > 0");
  if (freq_uncertainty_pump < 0.0 || freq_uncertainty_stokes < 0.0)
    throw InvalidInput("sensor.freq_uncertainty_pump/stokes must be >= 0");
  if (!(photon_count_pump > 0.0) || !(photon_count_stokes > 0.0))
    throw InvalidInput("sensor.photon_count_pump/stokes must be > 0");
  if (!(Delta_hf > 0.0)) throw InvalidInput("sensor.Delta_hf must be > 0");
  if (!(distinguishability_threshold > 0.0))
    throw InvalidInput("sensor.distinguishability_threshold must be > 0");
}

void apply_fractional_stability(SensorConfig& cfg, double omega_p, double fraction) {
  if (!(omega_p > 0.0) || fraction < 0.0)
    throw InvalidInput("apply_fractional_stability: need omega_p > 0 and fraction >= 0");
  cfg.freq_uncertainty_pump = 0.5 * fraction * omega_p;
  cfg.freq_uncertainty_stokes = 0.5 * fraction * omega_p;
}

double rotor_energy(int m_ell, double omega_0, double Omega) {
  const double m = m_ell;
  return PhysicalConstants::hbar * (m * m * omega_0 + Omega * m);
}

double transition_frequency(int m_ell, int zeta, int L, double omega_0, double Omega) {
  if (L < 1) throw InvalidInput("transition_frequency: L must be >= 1");
  if (zeta != 1 && zeta != -1) throw InvalidInput("transition_frequency: zeta must be +-1");
  const int from = zeta * m_ell;
  const int to = zeta * (m_ell + 2 * L);
  // Differences of the m^2 and m parts separately, so no hbar round trip.
  const double m0 = from, m1 = to;
  return (m1 * m1 - m0 * m0) * omega_0 + (m1 - m0) * Omega;
}

double transition_frequency_closed_form(int m_ell, int zeta, int L, double omega_0, double Omega) {
  return 4.0 * L * (L + m_ell) * omega_0 + 2.0 * zeta * L * Omega;
}

double line_splitting(int m_ell, int L, double Omega, double omega_0) {
  if (L < 1) throw InvalidInput("line_splitting: L must be >= 1");
  // Coefficients of omega_0 and Omega in each line's energy difference, differenced
  // as integers so the omega_0 parts cancel without round-off.
  const auto coefficients = [&](int zeta) {
    const long long from = static_cast<long long>(zeta) * m_ell;
    const long long to = static_cast<long long>(zeta) * (m_ell + 2 * L);
    return std::pair{to * to - from * from, to - from};
  };
  const auto [sq_plus, lin_plus] = coefficients(1);
  const auto [sq_minus, lin_minus] = coefficients(-1);
  return static_cast<double>(sq_plus - sq_minus) * omega_0 + static_cast<double>(lin_plus - lin_minus) * Omega;
}

bool periodicity_check(int m_ell, int m_Omega, int L, double omega_0, double Omega, double rel_tol) {
  return periodicity_check(m_ell, m_Omega, L, omega_0, Omega, 2.0 * m_Omega * omega_0, rel_tol);
}

bool periodicity_check(int m_ell, int m_Omega, int L, double omega_0, double Omega, double shift,
                       double rel_tol) {
  const double lhs = transition_frequency(m_ell + m_Omega, 1, L, omega_0, Omega - shift);
  const double rhs = transition_frequency(m_ell, 1, L, omega_0, Omega);
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 4.0 * L * L * omega_0});
  return std::abs(lhs - rhs) <= rel_tol * scale;
}

double budget_frequency(const SensorConfig& cfg) {
  cfg.validate();
  return (cfg.freq_uncertainty_pump + cfg.freq_uncertainty_stokes) /
         (4.0 * cfg.kick_oam_L * std::sqrt(static_cast<double>(cfg.ring_count_N)));
}

RabiFluctuationBudget budget_rabi_fluctuation(const SensorConfig& cfg, double C_over_hbar) {
  cfg.validate();
  if (!(C_over_hbar > 0.0)) throw InvalidInput("budget_rabi_fluctuation: C/hbar must be > 0");
  const double hbar = PhysicalConstants::hbar;
  const double phi_R = kPi;
  RabiFluctuationBudget b;
  b.dphi_over_phi = std::hypot(cfg.freq_uncertainty_pump / cfg.Delta_hf,
                               cfg.freq_uncertainty_stokes / cfg.Delta_hf);
  b.dphi = phi_R * b.dphi_over_phi;
  b.deps = 4.0 * hbar * cfg.Omega_R * b.dphi;
  b.deps_over_C = b.deps / (hbar * C_over_hbar);
  b.dOmega = b.deps / (4.0 * cfg.kick_oam_L * hbar * std::sqrt(static_cast<double>(cfg.ring_count_N)));
  return b;
}

ShotNoiseBudget budget_shot_noise(const SensorConfig& cfg) {
  cfg.validate();
  const double hbar = PhysicalConstants::hbar;
  const double phi_R = kPi;
  ShotNoiseBudget b;
  b.dphi = phi_R * (1.0 / std::sqrt(cfg.photon_count_pump) + 1.0 / std::sqrt(cfg.photon_count_stokes));
  b.deps = 4.0 * hbar * cfg.Omega_R * b.dphi / phi_R;
  b.dOmega = b.deps / (4.0 * cfg.kick_oam_L * hbar * std::sqrt(static_cast<double>(cfg.ring_count_N)));
  return b;
}

SensorBudget sensor_budget(const SensorConfig& cfg) {
  SensorBudget b;
  b.dOmega_freq = budget_frequency(cfg);
  b.rabi = budget_rabi_fluctuation(cfg, cfg.omega_0);
  b.shot = budget_shot_noise(cfg);
  b.dOmega_rabi = b.rabi.dOmega;
  b.dOmega_shot = b.shot.dOmega;
  return b;
}

bool splitting_resolvable(const SensorConfig& cfg, double delta_eps) {
  const auto b = budget_rabi_fluctuation(cfg, cfg.omega_0);
  const double dphi_eps = delta_eps / (4.0 * PhysicalConstants::hbar * cfg.Omega_R);
  return dphi_eps > cfg.distinguishability_threshold * b.dphi;
}

TiltGeometry tilt_compensation(const Eigen::Vector3d& g, const Eigen::Vector3d& a,
                               const Eigen::Vector3d& Omega) {
  TiltGeometry t;
  t.gravity_g = g;
  t.acceleration_a = a;
  t.angular_velocity_Omega = Omega;
  t.effective_gravity = g - a;
  const double norm = t.effective_gravity.norm();
  if (!(norm > 0.0)) throw InvalidInput("tilt_compensation: g - a = 0 leaves the rotor plane undefined");
  if (!(g.norm() > 0.0)) throw InvalidInput("tilt_compensation: g must be nonzero");
  t.rotor_axis = -t.effective_gravity / norm;
  // atan2 of |cross| and dot stays accurate near 0 and pi.
  t.tilt_angle_theta_a = std::atan2(g.cross(t.effective_gravity).norm(), g.dot(t.effective_gravity));
  t.effective_Omega_prime = Omega.dot(t.rotor_axis);
  return t;
}

std::string SpectralLine::id() const {
  return "m" + std::string(m_ell < 0 ? "-" : "+") + std::to_string(std::abs(m_ell)) +
         (zeta > 0 ? "_z+1" : "_z-1");
}

std::vector<SpectralLine> six_lines() {
  std::vector<SpectralLine> lines;
  for (int m : {0, 1, -1})
    for (int zeta : {1, -1}) lines.push_back({m, zeta});
  return lines;
}

std::vector<RotationScanRow> rotation_scan(int L, double omega_0, const std::vector<double>& Omegas) {
  std::vector<RotationScanRow> rows;
  rows.reserve(Omegas.size() * 6);
  for (double Omega : Omegas)
    for (const auto& line : six_lines())
      rows.push_back({Omega, line, transition_frequency(line.m_ell, line.zeta, L, omega_0, Omega)});
  return rows;
}

}  // namespace qrotor
