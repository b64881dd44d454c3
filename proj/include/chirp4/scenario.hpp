// Run configuration read from a JSON document.
//
//   {
//     "system": "85Rb-D1",             // or {"preset": ..., overrides} or full fields
//     "pulse": {
//       "intensity": 833.8,            // W/cm^2, or "rabi_peak" in GHz
//       "fwhm": 2.99353,               // ns, or "tau0"
//       "chirp": -2.94752,             // GHz/ns, default 0
//       "detuning": 0,                 // GHz, default 0
//       "t_peak": 0                    // ns, default 0
//     },
//     "integration": {"window_sigmas": 5, "rel_tol": 1e-10, "abs_tol": 1e-12,
//                     "max_step": 0.01, "n_samples": 2000},
//     "sweep": {"chirp_min": -5, "chirp_max": 5, "n_chirp": 101,
//               "fwhm_min": 1, "fwhm_max": 5, "n_fwhm": 81},
//     "detuning": {"values": [0, 3.035]}  // or {"min": ..., "max": ..., "count": ...}
//     "output": {"dir": "out", "format": "csv"}
//   }
//
// Unknown and duplicate keys are rejected.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chirp4/integrator.hpp"
#include "chirp4/model.hpp"
#include "chirp4/table.hpp"

namespace chirp4 {

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

struct SweepSpec {
  double chirp_min = -5.0;
  double chirp_max = 5.0;
  std::size_t n_chirp = 101;
  double fwhm_min = 1.0;
  double fwhm_max = 5.0;
  std::size_t n_fwhm = 81;

  // An axis with a single point takes the pulse's own value, so a 1x1 sweep
  // reproduces the configured pulse.
  std::vector<double> chirps(const PulseParams& pulse) const;
  std::vector<double> fwhms(const PulseParams& pulse) const;
};

struct Scenario {
  LevelSystem system;
  bool system_validated = true;  // false for 87Rb presets and custom constants
  PulseParams pulse;
  std::optional<double> intensity;  // W/cm^2, when the pulse was given that way
  IntegrationConfig integration;
  SweepSpec sweep;
  std::vector<double> deltas;  // detuning scan values, GHz
  std::string output_dir = ".";
  TableFormat format = TableFormat::Csv;
};

/// Throws ConfigError with the offending field, or line and column for
/// syntax errors.
Scenario parse_scenario(std::string_view text);

}  // namespace chirp4
