#include "chirp4/model.hpp"

#include <cmath>

namespace chirp4 {
namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void LevelSystem::validate() const {
  if (!(omega21 >= 0.0) || !finite(omega21)) throw InputError("omega21 must be nonnegative");
  if (!(omega43 >= 0.0) || !finite(omega43)) throw InputError("omega43 must be nonnegative");
  if (!(dipole > 0.0) || !finite(dipole)) throw InputError("dipole must be positive");
  if (n_levels != 3 && n_levels != 4) {
    throw InputError("n_levels must be 3 or 4, got " + std::to_string(n_levels));
  }
}

namespace presets {

LevelSystem rb85_d1() { return {3.035, 0.362, 2.54e-29, 4, "85Rb-D1"}; }
LevelSystem rb85_d2() { return {3.035, 0.0634, 3.58e-29, 4, "85Rb-D2"}; }
LevelSystem rb87_d1() { return {6.835, 0.8145, 2.54e-29, 4, "87Rb-D1"}; }
LevelSystem rb87_d2() { return {6.835, 0.1569, 3.58e-29, 4, "87Rb-D2"}; }

LevelSystem by_name(const std::string& name) {
  if (name == "85Rb-D1") return rb85_d1();
  if (name == "85Rb-D2") return rb85_d2();
  if (name == "87Rb-D1") return rb87_d1();
  if (name == "87Rb-D2") return rb87_d2();
  throw InputError("unknown preset '" + name + "'");
}

bool is_validated(const std::string& name) { return name.starts_with("85Rb"); }

}  // namespace presets

void PulseParams::validate() const {
  if (!(tau0 > 0.0) || !finite(tau0)) throw InputError("tau0 must be positive");
  if (!(rabi_peak >= 0.0) || !finite(rabi_peak)) {
    throw InputError("rabi_peak must be nonnegative");
  }
  if (!finite(chirp)) throw InputError("chirp must be finite");
  if (!finite(detuning)) throw InputError("detuning must be finite");
  if (!finite(t_peak)) throw InputError("t_peak must be finite");
}

double norm_squared(std::span<const Complex> amplitudes) {
  double sum = 0.0;
  for (const auto& c : amplitudes) sum += std::norm(c);
  return sum;
}

StateVector::StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw InputError("state vector is empty");
  const double n = chirp4::norm_squared(amplitudes_);
  if (!(std::abs(n - 1.0) <= kNormTolerance)) {
    throw InputError("state vector is not normalised: |c|^2 = " + std::to_string(n));
  }
}

StateVector StateVector::ground(int n_levels) {
  if (n_levels < 1) throw InputError("n_levels must be positive");
  std::vector<Complex> c(static_cast<std::size_t>(n_levels));
  c[0] = 1.0;
  return StateVector(std::move(c));
}

double StateVector::norm_squared() const { return chirp4::norm_squared(amplitudes_); }

std::vector<double> StateVector::populations() const {
  std::vector<double> p;
  p.reserve(amplitudes_.size());
  for (const auto& c : amplitudes_) p.push_back(std::norm(c));
  return p;
}

double rabi_at(double t, const PulseParams& pulse) {
  const double x = (t - pulse.t_peak) / pulse.tau0;
  return pulse.rabi_peak * std::exp(-x * x);
}

RealMatrix build_hamiltonian(double t, const LevelSystem& system, const PulseParams& pulse) {
  if (system.n_levels != 4) {
    throw InputError("build_hamiltonian needs a four-level system, got n_levels = " +
                     std::to_string(system.n_levels));
  }
  const double sweep = pulse.chirp * (t - pulse.t_peak);
  const double half_rabi = 0.5 * rabi_at(t, pulse);

  RealMatrix h = RealMatrix::Zero(4, 4);
  h(0, 0) = pulse.detuning + system.omega43 + sweep;
  h(1, 1) = pulse.detuning + system.omega43 + system.omega21 + sweep;
  h(2, 2) = 0.0;
  h(3, 3) = system.omega43;
  for (int g = 0; g < 2; ++g) {
    for (int e = 2; e < 4; ++e) {
      h(g, e) = half_rabi;
      h(e, g) = half_rabi;
    }
  }
  return h;
}

RealMatrix build_lambda3_hamiltonian(double t, const LevelSystem& system,
                                     const PulseParams& pulse) {
  if (system.n_levels != 3) {
    throw InputError("build_lambda3_hamiltonian needs a three-level system, got n_levels = " +
                     std::to_string(system.n_levels));
  }
  const double sweep = pulse.chirp * (t - pulse.t_peak);
  const double half_rabi = 0.5 * rabi_at(t, pulse);

  RealMatrix h = RealMatrix::Zero(3, 3);
  h(0, 0) = pulse.detuning + sweep;
  h(1, 1) = pulse.detuning + system.omega21 + sweep;
  h(0, 2) = h(2, 0) = half_rabi;
  h(1, 2) = h(2, 1) = half_rabi;
  return h;
}

RealMatrix hamiltonian_for(double t, const LevelSystem& system, const PulseParams& pulse) {
  return system.n_levels == 3 ? build_lambda3_hamiltonian(t, system, pulse)
                              : build_hamiltonian(t, system, pulse);
}

}  // namespace chirp4
