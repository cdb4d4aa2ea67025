#include "qrotor/raman.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qrotor/errors.hpp"

namespace qrotor {

void RamanConfig::validate(const BeamConfig& beam) const {
  if (kick_oam_L < 1) throw InvalidInput("raman.kick_oam_L must be >= 1");
  if (B_p0 < 0.0 || B_s0 < 0.0) throw InvalidInput("raman.B_p0/B_s0 must be >= 0");
  if (kick_power_P_e < 0.0) throw InvalidInput("raman.kick_power_P_e must be >= 0");
  if (Delta_hf == 0.0) throw InvalidInput("raman.Delta_hf must be nonzero");
  if (Delta_e == 0.0) throw InvalidInput("raman.Delta_e must be nonzero");
  if (pulse_duration_tau < 0.0) throw InvalidInput("raman.pulse_duration_tau must be >= 0");
  if (omega0 < 0.0) throw InvalidInput("raman.omega0 must be >= 0");
  if (kick_waist_w_e) {
    if (!(*kick_waist_w_e > 0.0)) throw InvalidInput("raman.kick_waist_w_e must be > 0");
    const double lhs = *kick_waist_w_e * std::sqrt(kick_oam_L / 2.0);
    const double rhs = beam.ring_radius(0.0);
    if (std::abs(lhs - rhs) > 1e-6 * rhs)
      throw InvalidInput("raman.kick_waist_w_e: w_e sqrt(L/2) must equal the trap ring radius");
  }
}

double RamanConfig::kick_waist(const BeamConfig& beam) const {
  if (kick_waist_w_e) return *kick_waist_w_e;
  return beam.ring_radius(0.0) / std::sqrt(kick_oam_L / 2.0);
}

double RamanConfig::transition_frequency_2L() const {
  return 4.0 * kick_oam_L * kick_oam_L * omega0;
}

RamanCoupling effective_coupling(const RamanConfig& cfg, const BeamConfig& beam,
                                 const AtomSpecies& species) {
  cfg.validate(beam);
  const double hbar = PhysicalConstants::hbar;
  const double gmu = species.g_factor * PhysicalConstants::mu_B;
  const double L = cfg.kick_oam_L;
  const double w_e = cfg.kick_waist(beam);

  RamanCoupling out;
  out.V_b = gmu * gmu * cfg.B_p0 * cfg.B_s0 / (3.0 * hbar * cfg.Delta_hf);
  // L^L e^{-L} / L! in log form.
  const double ring_factor = std::exp(L * std::log(L) - L - std::lgamma(L + 1.0));
  out.V_e = 4.0 * cfg.polarizability * cfg.kick_power_P_e * ring_factor /
            (kPi * w_e * w_e * PhysicalConstants::c * PhysicalConstants::epsilon_0);
  out.V = out.V_e * out.V_b / (hbar * cfg.Delta_hf);
  out.Omega_R = 2.0 * std::sqrt(2.0) * std::abs(out.V) / hbar;

  const double w2L = cfg.transition_frequency_2L();
  if (std::abs(cfg.Delta_e) < kValidityRatio * std::abs(cfg.Delta_hf))
    out.warnings.push_back("|Delta_e| >> |Delta_hf| violated (ratio " +
                           std::to_string(std::abs(cfg.Delta_e / cfg.Delta_hf)) + ")");
  if (w2L > 0.0 && std::abs(cfg.Delta_hf) < kValidityRatio * w2L)
    out.warnings.push_back("|Delta_hf| >> omega_2L0 violated (ratio " +
                           std::to_string(std::abs(cfg.Delta_hf) / w2L) + ")");
  return out;
}

Eigen::Matrix3cd rwa_hamiltonian(double delta, double Omega_R) {
  const double a = Omega_R * std::sqrt(2.0) / 4.0;
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 1) = h(1, 0) = h(0, 2) = h(2, 0) = a;
  h(1, 1) = h(2, 2) = -delta;
  return h;
}

double transition_probability_closed_form(double delta, double Omega_R, double tau) {
  if (Omega_R < 0.0) throw InvalidInput("transition_probability: Omega_R must be >= 0");
  const double w2 = Omega_R * Omega_R + delta * delta;
  if (w2 == 0.0) return 0.0;
  const double s = std::sin(0.5 * tau * std::sqrt(w2));
  return Omega_R * Omega_R / w2 * s * s;
}

Eigen::Vector3cd evolve_rwa_state(double delta, double Omega_R, double tau) {
  // The matrix is real symmetric; exp(-i H tau) = V exp(-i D tau) V^T.
  const Eigen::Matrix3d h = rwa_hamiltonian(delta, Omega_R).real();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
  const Eigen::Matrix3d& v = es.eigenvectors();
  Eigen::Vector3cd phases;
  for (int i = 0; i < 3; ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * tau);
  const Eigen::Vector3cd coeff = phases.cwiseProduct(v.row(0).transpose().cast<std::complex<double>>());
  return v.cast<std::complex<double>>() * coeff;
}

double evolve_rwa(double delta, double Omega_R, double tau) {
  const Eigen::Vector3cd psi = evolve_rwa_state(delta, Omega_R, tau);
  return std::norm((psi(1) + psi(2)) / std::sqrt(2.0));
}

}  // namespace qrotor
