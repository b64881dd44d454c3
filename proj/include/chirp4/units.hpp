// Conversions between laboratory quantities and model parameters.

#pragma once

namespace chirp4::units {

inline constexpr double kSpeedOfLight = 299792458.0;         // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kPlanck = 6.62607015e-34;            // J s

/// FWHM of the field envelope exp(-t^2/tau0^2) is tau0 * 2 sqrt(ln 2).
double tau0_to_fwhm(double tau0);
double fwhm_to_tau0(double fwhm);

/// Peak Rabi frequency (GHz) mu E0 / h for a beam of the given peak intensity
/// (W/cm^2), with E0 = sqrt(2 I / (c eps0)).
double intensity_to_rabi(double intensity_w_per_cm2, double dipole);
double rabi_to_intensity(double rabi_ghz, double dipole);

}  // namespace chirp4::units
