#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrotor/lg_optics.hpp"
#include "qrotor/raman.hpp"
#include "qrotor/units.hpp"

namespace qrotor {

/// How the detuning of ring j differs from that of ring 0: delta_j = delta + shift_j.
struct ShiftModel {
  enum class Kind {
    none,        // shift_j = 0
    as_printed,  // 4 L^2 j^2 (omega0(r_l(0)) - omega0(r_l(z_j)))
    physical,    // 4 L^2 (omega0(r_l(0)) - omega0(r_l(z_j)))
    quadratic,   // s j^2
  };
  Kind kind = Kind::none;
  double scale_s = 0.0;  // rad/s, quadratic model only

  static Kind parse(const std::string& name);
  static std::string name(Kind kind);
};

/// omega0(z) = hbar / (2 M r_l(z)^2).
double ring_rotational_frequency(const BeamConfig& beam, const AtomSpecies& species, double z);

/// Shifts for j = -j_max..j_max (index j + j_max). The beam is used by the
/// as_printed and physical models only.
std::vector<double> ring_detuning_shifts(const ShiftModel& model, const BeamConfig& beam,
                                         const AtomSpecies& species, int kick_L, int j_max);
std::vector<double> ring_detuning_shifts(const ShiftModel& model, int j_max);

struct Lineshape {
  std::vector<double> delta_grid;   // rad/s, strictly increasing
  std::vector<double> probability;  // in [0, 1]
  double Omega_R = 0.0;             // rad/s
  double tau = 0.0;                 // s
  int j_max = 0;
};

/// Mean of P0(delta + shift_j) over the rings.
double ensemble_probability(const std::vector<double>& shifts, double delta, double Omega_R,
                            double tau);

Lineshape ensemble_lineshape(const std::vector<double>& shifts, double Omega_R, double tau,
                             const std::vector<double>& delta_grid, unsigned parallelism = 1);

Lineshape ensemble_lineshape(const BeamConfig& beam, const AtomSpecies& species,
                             const RamanConfig& cfg, int j_max, const ShiftModel& model,
                             const std::vector<double>& delta_grid, unsigned parallelism = 1);

/// n points evenly spaced on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

struct Peak {
  double delta_max = 0.0;
  double P_max = 0.0;
};

/// Global maximum of the ensemble curve: grid scan over [lo, hi] then Brent refinement.
Peak locate_peak(const std::vector<double>& shifts, double Omega_R, double tau, double lo,
                 double hi, std::size_t scan_points = 4001);

/// Full width at half maximum of a single-peaked function around `peak`.
double full_width_half_maximum(const std::function<double(double)>& f, double peak,
                               double step);

struct QuadraticCalibration {
  double scale_s = 0.0;
  Peak peak;
  bool exact = false;  // false when the target is out of reach and |delta_max - target| was minimized
};

/// Scale s of the quadratic model that puts the ensemble peak at `target_delta_max`.
QuadraticCalibration calibrate_quadratic_scale(double Omega_R, double tau, int j_max,
                                               double target_delta_max);

struct FitResult {
  double amplitude_A = 0.0;
  double delta_0 = 0.0;      // rad/s
  double Omega_R_eff = 0.0;  // rad/s
  double rms_residual = 0.0;
  int iterations = 0;
};

/// PiPulse: pulse length tied to the fitted width (tau = pi / Omega_R_eff), so the
/// model peak equals A. FixedDuration: tau held at the lineshape's pulse duration.
enum class FitModel { PiPulse, FixedDuration };

class FitFailure : public std::runtime_error {
 public:
  FitFailure(const std::string& what, FitResult best)
      : std::runtime_error(what), best_(best) {}
  const FitResult& best_so_far() const { return best_; }

 private:
  FitResult best_;
};

/// Least-squares fit of A P0(delta - delta_0, Omega_R_eff), multi-start over
/// Omega_R_eff in {1, 1.5, 2} Omega_R.
FitResult fit_lineshape(const Lineshape& ls, FitModel model = FitModel::PiPulse);

}  // namespace qrotor
