#include "qrotor/lg_optics.hpp"

#include <cmath>
#include <cstdlib>

#include "qrotor/errors.hpp"

namespace qrotor {

void BeamConfig::validate() const {
  if (!(wavelength > 0.0)) throw InvalidInput("beam.wavelength must be > 0");
  if (!(waist_w0 > 0.0)) throw InvalidInput("beam.waist_w0 must be > 0");
  if (!(phase_z0 > 0.0 && phase_z0 < wavelength / 2.0))
    throw InvalidInput("beam.phase_z0 must satisfy 0 < z0 < wavelength/2");
  if (radial_p < 0) throw InvalidInput("beam.radial_p must be >= 0");
  if (divergence_scale_z_eff && !(*divergence_scale_z_eff > 0.0))
    throw InvalidInput("beam.divergence_scale_z_eff must be > 0");
  if (trap_depth_V0 < 0.0) throw InvalidInput("beam.trap_depth_V0 must be >= 0");
}

double BeamConfig::wavenumber() const { return 2.0 * kPi / wavelength; }

double BeamConfig::rayleigh_range() const { return kPi * waist_w0 * waist_w0 / wavelength; }

double BeamConfig::relative_width(double z) const {
  if (collimated) return 1.0;
  const double scale = divergence_scale_z_eff.value_or(rayleigh_range());
  const double s = z / scale;
  return std::sqrt(1.0 + s * s);
}

double BeamConfig::width(double z) const { return waist_w0 * relative_width(z); }

double BeamConfig::ring_radius(double z) const {
  return width(z) * std::sqrt(std::abs(oam_l) / 2.0);
}

double assoc_laguerre(int p, double alpha, double x) {
  if (p < 0) throw InvalidInput("assoc_laguerre: p must be >= 0");
  if (p == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int n = 1; n < p; ++n) {
    const double next = ((2.0 * n + 1.0 + alpha - x) * cur - (n + alpha) * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::complex<double> lg_mode_amplitude(const BeamConfig& beam, double r, double phi, double z) {
  if (r < 0.0) throw InvalidInput("lg_mode_amplitude: r must be >= 0");
  const int al = std::abs(beam.oam_l);
  const int p = beam.radial_p;
  // sqrt(2 p! / (pi (p+|l|)!)) via lgamma to stay finite for large |l|.
  const double log_norm =
      0.5 * (std::log(2.0) + std::lgamma(p + 1.0) - std::log(kPi) - std::lgamma(p + al + 1.0));
  const double w = beam.width(z);
  const double zr = beam.rayleigh_range();
  const double k = beam.wavenumber();
  const double x = 2.0 * r * r / (w * w);
  double magnitude = std::exp(log_norm) * std::sqrt(beam.power_P0 / PhysicalConstants::c) / w;
  magnitude *= std::pow(r * std::sqrt(2.0) / w, al) * std::exp(-r * r / (w * w));
  magnitude *= assoc_laguerre(p, al, x);
  const double phase = -k * r * r * z / (2.0 * (z * z + zr * zr)) - beam.oam_l * phi +
                       (2.0 * p + al + 1.0) * std::atan(z / zr);
  return std::polar(magnitude, phase);
}

double optical_potential(const BeamConfig& beam, double r, double z) {
  if (beam.radial_p != 0)
    throw UnsupportedMode("optical_potential: only p = 0 modes have a phi-independent trap");
  if (r < 0.0) throw InvalidInput("optical_potential: r must be >= 0");
  const int al = std::abs(beam.oam_l);
  const double k = beam.wavenumber();
  const double c = std::cos(k * (z - beam.phase_z0));
  const double wf = beam.relative_width(z);
  const double rho2 = al == 0 ? 0.0 : std::pow(r / beam.ring_radius(z), 2);
  // rho^{2|l|} e^{-|l|(rho^2 - 1)}; for l = 0 this is the plain Gaussian e^{-2 r^2/w^2}.
  double envelope;
  if (al == 0) {
    const double w = beam.width(z);
    envelope = std::exp(-2.0 * r * r / (w * w));
  } else if (rho2 == 0.0) {
    envelope = 0.0;
  } else {
    envelope = std::exp(al * (std::log(rho2) - rho2 + 1.0));
  }
  return -beam.trap_depth_V0 * c * c * envelope / (wf * wf);
}

double optical_potential(const BeamConfig& beam, const AtomSpecies& /*species*/, double r, double z) {
  return optical_potential(beam, r, z);
}

TrapGeometry ring_minimum(const BeamConfig& beam, const AtomSpecies& species, int j) {
  beam.validate();
  species.validate();
  if (beam.oam_l == 0) throw InvalidInput("ring_minimum: oam_l must be non-zero for a ring trap");
  if (!(beam.trap_depth_V0 > 0.0)) throw InvalidInput("ring_minimum: trap_depth_V0 must be > 0");
  const double hbar = PhysicalConstants::hbar;
  const double k = beam.wavenumber();
  const double e0 = recoil_energy(species, beam.wavelength);
  const double v0 = beam.trap_depth_V0;

  TrapGeometry g;
  g.ring_index_j = j;
  g.z_j = kPi * j / k + beam.phase_z0;
  g.w_at_zj = beam.width(g.z_j);
  g.r_l = beam.ring_radius(g.z_j);
  const double wf = beam.relative_width(g.z_j);
  g.omega_z = (2.0 / wf) * std::sqrt(e0 * v0) / hbar;
  g.b_z = std::sqrt(wf) / k * std::pow(e0 / v0, 0.25);
  const double curvature = 4.0 * std::abs(beam.oam_l) * v0 / (wf * wf * g.r_l * g.r_l);
  g.omega_r = std::sqrt(curvature / species.mass);
  g.b_r = std::sqrt(hbar / (species.mass * g.omega_r));
  g.depth_at_ring = -v0 / (wf * wf);
  return g;
}

std::vector<TrapGeometry> ring_minima(const BeamConfig& beam, const AtomSpecies& species,
                                      int j_first, int j_last) {
  if (j_last < j_first) throw InvalidInput("ring_minima: empty j range");
  std::vector<TrapGeometry> out;
  out.reserve(static_cast<std::size_t>(j_last - j_first + 1));
  for (int j = j_first; j <= j_last; ++j) out.push_back(ring_minimum(beam, species, j));
  return out;
}

HarmonicDecomposition harmonic_decomposition(const BeamConfig& beam, int j) {
  if (beam.radial_p != 0) throw UnsupportedMode("harmonic_decomposition: p must be 0");
  beam.validate();
  const double k = beam.wavenumber();
  const double z_j = kPi * j / k + beam.phase_z0;
  const double wf = beam.relative_width(z_j);
  return {RadialProfile(beam, z_j), AxialHarmonic(z_j, beam.trap_depth_V0 * k * k / (wf * wf))};
}

double trap_depth_from_power(const BeamConfig& beam, double polarizability) {
  const double r = beam.ring_radius(0.0);
  const double u = std::abs(lg_mode_amplitude(beam, r, 0.0, 0.0));
  return 4.0 * polarizability * u * u / PhysicalConstants::epsilon_0;
}

}  // namespace qrotor
