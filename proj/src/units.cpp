#include "chirp4/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "chirp4/model.hpp"

namespace chirp4::units {
namespace {

const double kFwhmFactor = 2.0 * std::sqrt(std::numbers::ln2);

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InputError(std::string(what) + " must be positive and finite, got " +
                     std::to_string(x));
  }
}

}  // namespace

double tau0_to_fwhm(double tau0) {
  require_positive(tau0, "tau0");
  return tau0 * kFwhmFactor;
}

double fwhm_to_tau0(double fwhm) {
  require_positive(fwhm, "fwhm");
  return fwhm / kFwhmFactor;
}

double intensity_to_rabi(double intensity_w_per_cm2, double dipole) {
  if (!(intensity_w_per_cm2 >= 0.0) || !std::isfinite(intensity_w_per_cm2)) {
    throw InputError("intensity must be nonnegative and finite");
  }
  require_positive(dipole, "dipole");
  const double intensity_si = intensity_w_per_cm2 * 1e4;
  const double field = std::sqrt(2.0 * intensity_si / (kSpeedOfLight * kVacuumPermittivity));
  return dipole * field / kPlanck * 1e-9;
}

double rabi_to_intensity(double rabi_ghz, double dipole) {
  if (!(rabi_ghz >= 0.0) || !std::isfinite(rabi_ghz)) {
    throw InputError("Rabi frequency must be nonnegative and finite");
  }
  require_positive(dipole, "dipole");
  const double field = rabi_ghz * 1e9 * kPlanck / dipole;
  const double intensity_si = 0.5 * kSpeedOfLight * kVacuumPermittivity * field * field;
  return intensity_si * 1e-4;
}

}  // namespace chirp4::units
