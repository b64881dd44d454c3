// Regime diagnostics and the four-level versus Lambda comparison.

#pragma once

#include <vector>

#include "chirp4/integrator.hpp"
#include "chirp4/model.hpp"

namespace chirp4 {

/// Ratio above which "a >> b" counts as satisfied, and strongly satisfied.
inline constexpr double kMuchGreaterRatio = 5.0;
inline constexpr double kMuchGreaterStrongRatio = 10.0;
/// Landau-Zener ratio below which the condition counts as strongly met.
inline constexpr double kLandauZenerStrongRatio = 0.1;

struct AdiabaticityReport {
  double chirp_bandwidth_product = 0.0;  // |a| tau0
  bool chirp_condition_met = false;      // product > w21
  double lz_ratio = 0.0;                 // |a| / W^2; +inf when W = 0 and a != 0
  bool lz_condition_met = false;         // lz_ratio < 1
  bool lz_strong = false;                // lz_ratio < 0.1
  double spectral_width = 0.0;           // 1 / tau0
  bool broadband = false;                // 1 / tau0 > w21, pulse-area regime
};

AdiabaticityReport adiabaticity_report(const LevelSystem& system, const PulseParams& pulse);

/// Time integral of 2 pi W(t): 2 pi W tau0 sqrt(pi), in radians.
double pulse_area(const PulseParams& pulse);

/// Lambda model keeping both ground levels and the lower excited level.
LevelSystem reduce_to_lambda3(const LevelSystem& system);

struct ValidityFlag {
  double ratio = 0.0;
  bool satisfied = false;  // ratio > kMuchGreaterRatio
  bool strong = false;     // ratio > kMuchGreaterStrongRatio
};

ValidityFlag much_greater(double value, double reference);

struct ComparisonReport {
  std::vector<double> p_final_4lvl;
  std::vector<double> p_final_3lvl;
  double delta_p2 = 0.0;
  ValidityFlag chirp_vs_omega43;  // |a| tau0 >> w43
  ValidityFlag rabi_vs_omega43;   // W >> w43

  bool lambda_valid() const { return chirp_vs_omega43.satisfied && rabi_vs_omega43.satisfied; }
};

/// Propagates the four-level system and its Lambda reduction from |1>.
ComparisonReport compare_yields(const LevelSystem& system, const PulseParams& pulse,
                                const IntegrationConfig& config = {});

}  // namespace chirp4
