#include "qrotor/five_level.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "qrotor/errors.hpp"

namespace qrotor {

Matrix5cd FiveLevelModel::hamiltonian(double t) const {
  Matrix5cd h = Matrix5cd::Zero();
  for (int i = 0; i < 5; ++i) h(i, i) = diagonal(i);
  const std::complex<double> b = pump + stokes * std::polar(1.0, -omega_ps * t);
  h(0, 2) = h(1, 3) = b;
  h(2, 0) = h(3, 1) = std::conj(b);
  h(0, 4) = h(4, 0) = h(1, 4) = h(4, 1) = electric;
  return h;
}

double magnetic_coupling_factor(double m_F) {
  if (std::abs(std::abs(m_F) - 0.5) > 1e-12)
    throw InvalidInput("magnetic_coupling_factor: m_F must be +-1/2 in the F = 1/2 manifold");
  return 2.0 * m_F * std::sqrt(std::sqrt(2.0) / 3.0);
}

FiveLevelModel five_level_model(const RamanConfig& cfg, const BeamConfig& beam,
                                const AtomSpecies& species, double m_F) {
  const RamanCoupling c = effective_coupling(cfg, beam, species);
  const double hbar = PhysicalConstants::hbar;
  const double w2L = cfg.transition_frequency_2L();
  const double kappa = magnetic_coupling_factor(m_F) * species.g_factor * PhysicalConstants::mu_B / hbar;

  FiveLevelModel m;
  m.diagonal << 0.0, w2L, -cfg.Delta_hf, -cfg.Delta_hf + w2L, -cfg.Delta_e;
  m.pump = kappa * cfg.B_p0;
  m.stokes = kappa * cfg.B_s0;
  // 2 |h_e|^2 / (hbar |Delta_e|) = V_e.
  const double h_e = std::sqrt(std::abs(c.V_e) * std::abs(cfg.Delta_e) / (2.0 * hbar));
  m.electric = std::sqrt(2.0) * h_e;
  m.omega_ps = cfg.omega_p - cfg.omega_s;
  return m;
}

EffectiveTwoLevel adiabatic_eliminate(const RamanConfig& cfg, const BeamConfig& beam,
                                      const AtomSpecies& species, double m_F) {
  const RamanCoupling c = effective_coupling(cfg, beam, species);
  const FiveLevelModel m = five_level_model(cfg, beam, species, m_F);
  const double hbar = PhysicalConstants::hbar;

  EffectiveTwoLevel out;
  const double x_p = m.pump / cfg.Delta_hf;
  const double x_s = m.stokes / cfg.Delta_hf;
  out.v_b = std::abs(x_p) + std::abs(x_s);
  const double h_e = m.electric / std::sqrt(2.0);
  out.v_e = h_e / std::abs(cfg.Delta_e);
  if (out.v_b > kPerturbativeLimit)
    throw ValidityError("adiabatic_eliminate: |v_b| exceeds the perturbative limit", out.v_b);
  if (out.v_e > kPerturbativeLimit)
    throw ValidityError("adiabatic_eliminate: |v_e| exceeds the perturbative limit", out.v_e);

  // u_b^2 = 1 - |x_p + x_s e^{-i omega_ps t}|^2 multiplies the Stark coupling.
  out.stark_coupling = 2.0 * hbar * h_e * h_e / cfg.Delta_e;
  out.static_coupling = out.stark_coupling * (1.0 - x_p * x_p - x_s * x_s);
  out.cos_amplitude_symmetric = std::abs(out.stark_coupling * 2.0 * x_p * x_s);
  out.cos_amplitude_component = out.cos_amplitude_symmetric / std::sqrt(2.0);

  const double eps = hbar * cfg.transition_frequency_2L();
  out.hamiltonian << 0.0, out.static_coupling, out.static_coupling, eps;
  const double split = std::hypot(eps, 2.0 * out.static_coupling);
  out.resonance_frequency = split / hbar;
  out.predicted_rabi = c.Omega_R * (split > 0.0 ? eps / split : 1.0);
  return out;
}

namespace {

Matrix5cd exp_minus_i(const Matrix5cd& h, double dt) {
  const Eigen::SelfAdjointEigenSolver<Matrix5cd> es(h);
  Vector5cd phases;
  for (int i = 0; i < 5; ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * dt);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Vector5cd propagate_magnus(const FiveLevelModel& model, Vector5cd psi, double t0, double t1,
                           std::size_t steps, const StateObserver& observer) {
  if (steps == 0) throw InvalidInput("propagate_magnus: steps must be > 0");
  const double h = (t1 - t0) / static_cast<double>(steps);
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const double a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
  const double a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = t0 + h * static_cast<double>(n);
    const Matrix5cd h1 = model.hamiltonian(t + c1 * h);
    const Matrix5cd h2 = model.hamiltonian(t + c2 * h);
    psi = exp_minus_i(a2 * h1 + a1 * h2, h) * psi;
    psi = exp_minus_i(a1 * h1 + a2 * h2, h) * psi;
    if (observer) observer(t + h, psi);
  }
  return psi;
}

Vector5cd propagate_rk45(const FiveLevelModel& model, Vector5cd psi, double t0, double t1,
                         double rel_tol, double abs_tol) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<std::complex<double>>;
  State x(psi.data(), psi.data() + 5);
  const auto rhs = [&](const State& y, State& dy, double t) {
    const Matrix5cd h = model.hamiltonian(t);
    for (int i = 0; i < 5; ++i) {
      std::complex<double> s = 0.0;
      for (int k = 0; k < 5; ++k) s += h(i, k) * y[static_cast<std::size_t>(k)];
      dy[static_cast<std::size_t>(i)] = std::complex<double>(0.0, -1.0) * s;
    }
  };
  const double fastest = model.diagonal.cwiseAbs().maxCoeff() + std::abs(model.electric) +
                         std::abs(model.pump) + std::abs(model.stokes);
  odeint::integrate_adaptive(odeint::make_controlled(abs_tol, rel_tol, odeint::runge_kutta_dopri5<State>()),
                             rhs, x, t0, t1, 0.1 / std::max(fastest, 1.0));
  for (int i = 0; i < 5; ++i) psi(i) = x[static_cast<std::size_t>(i)];
  return psi;
}

RabiMeasurement measure_rabi_frequency(const FiveLevelModel& model, double omega_guess,
                                       std::size_t steps_per_drive_period) {
  if (!(omega_guess > 0.0)) throw InvalidInput("measure_rabi_frequency: omega_guess must be > 0");
  if (!(model.omega_ps > 0.0)) throw InvalidInput("measure_rabi_frequency: omega_ps must be > 0");
  if (steps_per_drive_period < 8) throw InvalidInput("measure_rabi_frequency: need >= 8 steps per period");
  const double period = 2.0 * kPi / model.omega_ps;
  const auto periods = static_cast<std::size_t>(std::ceil(1.5 * kPi / omega_guess / period));

  // Population of |1> averaged over each drive period, which removes the
  // micromotion at omega_ps.
  std::vector<double> block(periods, 0.0);
  std::size_t step = 0;
  Vector5cd psi = Vector5cd::Zero();
  psi(0) = 1.0;
  propagate_magnus(model, psi, 0.0, period * static_cast<double>(periods),
                   periods * steps_per_drive_period, [&](double, const Vector5cd& s) {
                     block[step / steps_per_drive_period] += std::norm(s(1));
                     ++step;
                   });
  for (double& b : block) b /= static_cast<double>(steps_per_drive_period);

  std::size_t k = 0;
  for (std::size_t i = 1; i < block.size(); ++i)
    if (block[i] > block[k]) k = i;
  if (k == 0 || k + 1 >= block.size())
    throw ConvergenceError("measure_rabi_frequency: population maximum at the window edge",
                           "peak block " + std::to_string(k) + " of " + std::to_string(block.size()));
  // Parabola through the three block means around the maximum.
  const double ym = block[k - 1], y0 = block[k], yp = block[k + 1];
  const double denom = ym - 2.0 * y0 + yp;
  const double offset = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
  RabiMeasurement out;
  out.t_peak = (static_cast<double>(k) + 0.5 + offset) * period;
  out.p_peak = y0 - 0.25 * (ym - yp) * offset;
  out.omega = kPi / out.t_peak;
  return out;
}

}  // namespace qrotor
