#include "chirp4/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace chirp4 {

AdiabaticityReport adiabaticity_report(const LevelSystem& system, const PulseParams& pulse) {
  system.validate();
  pulse.validate();

  AdiabaticityReport r;
  const double rate = std::abs(pulse.chirp);
  r.chirp_bandwidth_product = rate * pulse.tau0;
  r.chirp_condition_met = r.chirp_bandwidth_product > system.omega21;

  const double rabi2 = pulse.rabi_peak * pulse.rabi_peak;
  if (rate == 0.0) {
    r.lz_ratio = 0.0;
  } else if (rabi2 == 0.0) {
    r.lz_ratio = std::numeric_limits<double>::infinity();
  } else {
    r.lz_ratio = rate / rabi2;
  }
  r.lz_condition_met = r.lz_ratio < 1.0;
  r.lz_strong = r.lz_ratio < kLandauZenerStrongRatio;

  r.spectral_width = 1.0 / pulse.tau0;
  r.broadband = r.spectral_width > system.omega21;
  return r;
}

double pulse_area(const PulseParams& pulse) {
  return 2.0 * std::numbers::pi * pulse.rabi_peak * pulse.tau0 * std::sqrt(std::numbers::pi);
}

LevelSystem reduce_to_lambda3(const LevelSystem& system) {
  system.validate();
  if (system.n_levels != 4) throw InputError("reduce_to_lambda3 expects a four-level system");
  LevelSystem reduced = system;
  reduced.n_levels = 3;
  reduced.omega43 = 0.0;
  reduced.label = system.label + "-lambda3";
  return reduced;
}

ValidityFlag much_greater(double value, double reference) {
  ValidityFlag f;
  if (reference == 0.0) {
    f.ratio = value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    f.ratio = value / reference;
  }
  f.satisfied = f.ratio > kMuchGreaterRatio;
  f.strong = f.ratio > kMuchGreaterStrongRatio;
  return f;
}

ComparisonReport compare_yields(const LevelSystem& system, const PulseParams& pulse,
                                const IntegrationConfig& config) {
  if (system.n_levels != 4) throw InputError("compare_yields expects a four-level system");
  ComparisonReport r;
  r.p_final_4lvl = final_populations(propagate(system, pulse, config));
  r.p_final_3lvl = final_populations(propagate(reduce_to_lambda3(system), pulse, config));
  r.delta_p2 = std::abs(r.p_final_4lvl[1] - r.p_final_3lvl[1]);
  r.chirp_vs_omega43 = much_greater(std::abs(pulse.chirp) * pulse.tau0, system.omega43);
  r.rabi_vs_omega43 = much_greater(pulse.rabi_peak, system.omega43);
  return r;
}

}  // namespace chirp4
