#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "qrotor/lg_optics.hpp"
#include "qrotor/lineshape.hpp"
#include "qrotor/output.hpp"
#include "qrotor/raman.hpp"
#include "qrotor/sensor.hpp"
#include "qrotor/spectrum.hpp"
#include "qrotor/units.hpp"

namespace qrotor {

enum class OutputFormat { csv, json };

/// Fig. 4-style lineshape run. Omega_R and tau fall back to the raman section
/// (effective_coupling and pulse_duration_tau) when unset.
struct LineshapeSettings {
  int j_max = 80;
  std::optional<double> Omega_R;      // rad/s
  std::optional<double> tau;          // s; default pi / Omega_R
  ShiftModel shift_model;
  std::optional<double> calibrate_delta_max;  // in units of Omega_R
  double delta_min = -8.0;            // in units of Omega_R
  double delta_max = 6.0;
  int points = 1401;
  FitModel fit_model = FitModel::PiPulse;
};

struct RotationScanSettings {
  double Omega_min = -50.0;  // rad/s
  double Omega_max = 50.0;
  int points = 101;
};

struct TiltSettings {
  std::array<double, 3> gravity_g{0.0, 0.0, -9.80665};
  std::array<double, 3> acceleration_a{0.0, 0.0, 0.0};
  std::array<double, 3> angular_velocity_Omega{0.0, 0.0, 7.2921159e-5};
};

struct RunConfig {
  AtomSpecies species = lithium6();
  BeamConfig beam;
  SpectrumLimits spectrum;
  std::optional<RamanConfig> raman;
  LineshapeSettings lineshape;
  SensorConfig sensor;
  std::optional<double> sensor_fractional_stability;  // delta_omega / omega_p
  double sensor_omega_p = 1.43e9;                      // rad/s
  RotationScanSettings rotation_scan;
  TiltSettings tilt;
  std::optional<std::filesystem::path> output_path;
  OutputFormat output_format = OutputFormat::csv;
  unsigned parallelism = 1;

  /// Module invariants; throws ConfigError naming the field.
  void validate() const;
};

/// Parses and validates; throws ConfigError (field-named) on any problem.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);

/// Every field, defaults included. Parallelism is left out so outputs stay
/// identical across worker counts.
Json config_to_json(const RunConfig& cfg);

}  // namespace qrotor
