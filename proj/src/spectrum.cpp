#include "qrotor/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "qrotor/errors.hpp"
#include "qrotor/parallel.hpp"

namespace qrotor {

double rotational_constant(double r, const AtomSpecies& species) {
  if (!(r > 0.0)) throw InvalidInput("rotational_constant: r must be > 0");
  if (!(species.mass > 0.0)) throw InvalidInput("rotational_constant: mass must be > 0");
  const double hbar = PhysicalConstants::hbar;
  return hbar * hbar / (2.0 * species.mass * r * r);
}

int level_degeneracy(int m_ell, double F_ground) {
  const int multiplicity = static_cast<int>(std::lround(2.0 * F_ground + 1.0));
  return m_ell == 0 ? multiplicity : 2 * multiplicity;
}

namespace {

void check_trap(const BeamConfig& beam) {
  if (beam.radial_p != 0) throw UnsupportedMode("spectrum: only p = 0 traps are supported");
  if (!(beam.trap_depth_V0 > 0.0)) throw InvalidInput("spectrum: V0 must be > 0 for bound states");
}

FiniteDifferenceOptions fd_options(int points, bool want_states) {
  FiniteDifferenceOptions o;
  o.interior_points = points;
  o.want_states = want_states;
  return o;
}

RadialSolution solve_radial_with(const std::function<double(double)>& profile,
                                 const TrapGeometry& g, const AtomSpecies& species, int m_ell,
                                 int n_r_max, const SpectrumLimits& limits, bool want_states) {
  if (n_r_max < 0) throw InvalidInput("solve_radial: n_r_max must be >= 0");
  const double hbar = PhysicalConstants::hbar;
  const double centrifugal = (static_cast<double>(m_ell) * m_ell - 0.25) * hbar * hbar / (2.0 * species.mass);
  const auto effective = [&](double r) { return profile(r) + centrifugal / (r * r); };
  const double half = limits.radial_box_lengths * g.b_r;
  const double r_min = std::max(g.r_l - half, 1e-3 * g.r_l);
  const double r_max = g.r_l + half;
  RadialSolution out;
  out.detail = solve_bound_states_1d(effective, species.mass, r_min, r_max,
                                     static_cast<std::size_t>(n_r_max + 1),
                                     fd_options(limits.radial_points, want_states));
  out.energies = out.detail.energies;
  return out;
}

}  // namespace

AxialSolution solve_axial(const BeamConfig& beam, const AtomSpecies& species, int j, int n_z_max,
                          const SpectrumLimits& limits, bool want_states) {
  check_trap(beam);
  if (n_z_max < 0) throw InvalidInput("solve_axial: n_z_max must be >= 0");
  const TrapGeometry g = ring_minimum(beam, species, j);
  const auto decomposition = harmonic_decomposition(beam, j);
  const AxialHarmonic w = decomposition.axial;
  const double half = limits.axial_box_lengths * g.b_z;
  AxialSolution out;
  out.detail = solve_bound_states_1d([&](double z) { return w(z); }, species.mass, g.z_j - half,
                                     g.z_j + half, static_cast<std::size_t>(n_z_max + 1),
                                     fd_options(limits.axial_points, want_states));
  out.energies = out.detail.energies;
  return out;
}

RadialSolution solve_radial(const BeamConfig& beam, const AtomSpecies& species, int j, int m_ell,
                            int n_r_max, const SpectrumLimits& limits, bool want_states) {
  check_trap(beam);
  const TrapGeometry g = ring_minimum(beam, species, j);
  const RadialProfile profile(beam, g.z_j);
  return solve_radial_with([&](double r) { return profile(r); }, g, species, m_ell, n_r_max,
                           limits, want_states);
}

RadialSolution solve_radial_harmonic(const BeamConfig& beam, const AtomSpecies& species, int j,
                                     int m_ell, int n_r_max, const SpectrumLimits& limits) {
  check_trap(beam);
  const TrapGeometry g = ring_minimum(beam, species, j);
  const double k_r = species.mass * g.omega_r * g.omega_r;
  const auto quadratic = [&](double r) {
    return g.depth_at_ring + 0.5 * k_r * (r - g.r_l) * (r - g.r_l);
  };
  return solve_radial_with(quadratic, g, species, m_ell, n_r_max, limits, false);
}

RotorSpectrum assemble_spectrum(const BeamConfig& beam, const AtomSpecies& species,
                                const SpectrumLimits& limits) {
  beam.validate();
  species.validate();
  check_trap(beam);
  if (limits.n_z_max < 0 || limits.n_r_max < 0 || limits.m_ell_max < 0)
    throw InvalidInput("assemble_spectrum: limits must be >= 0");

  // Gaps need at least two axial/radial levels and |m| = 1, whatever the table limits are.
  const int nz = std::max(limits.n_z_max, 1);
  const int nr = std::max(limits.n_r_max, 1);
  const int mmax = std::max(limits.m_ell_max, 1);

  const AxialSolution axial = solve_axial(beam, species, limits.ring_index, nz, limits);
  std::vector<std::vector<double>> radial(static_cast<std::size_t>(mmax + 1));
  parallel_for(radial.size(), limits.parallelism, [&](std::size_t m) {
    radial[m] = solve_radial(beam, species, limits.ring_index, static_cast<int>(m), nr, limits).energies;
  });

  RotorSpectrum s;
  s.gaps.eps_z = axial.energies[1] - axial.energies[0];
  s.gaps.eps_r = radial[0][1] - radial[0][0];
  s.gaps.eps_ell = radial[1][0] - radial[0][0];
  s.ratio_z_over_r = s.gaps.eps_z / s.gaps.eps_r;
  s.ratio_r_over_ell = s.gaps.eps_r / s.gaps.eps_ell;
  s.inequalities_ok = s.gaps.eps_z > 0.0 && s.gaps.eps_r > 0.0 && s.gaps.eps_ell > 0.0 &&
                      s.ratio_z_over_r >= limits.ratio_threshold &&
                      s.ratio_r_over_ell >= limits.ratio_threshold;

  const double ground = axial.energies[0] + radial[0][0];
  for (int n_z = 0; n_z <= limits.n_z_max; ++n_z) {
    for (int n_r = 0; n_r <= limits.n_r_max; ++n_r) {
      for (int m = -limits.m_ell_max; m <= limits.m_ell_max; ++m) {
        EnergyLevel level;
        level.qn = {n_z, n_r, m, species.F_ground};
        level.energy = axial.energies[static_cast<std::size_t>(n_z)] +
                       radial[static_cast<std::size_t>(std::abs(m))][static_cast<std::size_t>(n_r)] - ground;
        level.degeneracy = level_degeneracy(m, species.F_ground);
        s.levels.push_back(level);
      }
    }
  }
  std::stable_sort(s.levels.begin(), s.levels.end(), [](const EnergyLevel& a, const EnergyLevel& b) {
    return std::tie(a.energy, a.qn.n_z, a.qn.n_r, a.qn.m_ell) <
           std::tie(b.energy, b.qn.n_z, b.qn.n_r, b.qn.m_ell);
  });
  return s;
}

double rotating_frame_energy(const EnergyLevel& level, double Omega) {
  return level.energy + PhysicalConstants::hbar * Omega * level.qn.m_ell;
}

}  // namespace qrotor
