// Physical model of a hyperfine-resolved alkali atom driven by a single
// linearly chirped Gaussian pulse.
//
// Units used throughout the library:
//   time         ns
//   frequency    GHz (ordinary, not angular)
//   chirp rate   GHz/ns (the ordinary-frequency sweep rate alpha / 2pi)
//   dipole       C m
//
// Level ordering (1-based in the physics, 0-based in code):
//   |1> lower ground hyperfine state (initially populated)
//   |2> upper ground hyperfine state, omega21 above |1>
//   |3> lower excited hyperfine state
//   |4> upper excited hyperfine state, omega43 above |3>
// The three-level Lambda variant keeps |1>, |2>, |3>.

#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace chirp4 {

using Complex = std::complex<double>;

/// Square real matrix with at most four rows; avoids heap allocation.
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

/// Raised for inputs that violate a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LevelSystem {
  double omega21 = 3.035;    // GHz
  double omega43 = 0.362;    // GHz
  double dipole = 2.54e-29;  // C m
  int n_levels = 4;
  std::string label = "85Rb-D1";

  /// Throws InputError when a field is out of range.
  void validate() const;
};

namespace presets {

// 85Rb constants. Both lines share the ground splitting; D1 excited pair is
// F'=2,3 of 5P1/2, D2 excited pair is F'=2,3 of 5P3/2.
LevelSystem rb85_d1();
LevelSystem rb85_d2();
// 87Rb constants are accepted but have not been checked against reference
// dynamics.
LevelSystem rb87_d1();
LevelSystem rb87_d2();

/// Looks up "85Rb-D1", "85Rb-D2", "87Rb-D1" or "87Rb-D2".
LevelSystem by_name(const std::string& name);
bool is_validated(const std::string& name);

}  // namespace presets

struct PulseParams {
  double rabi_peak = 0.0;  // GHz
  double tau0 = 1.0;       // ns, field envelope exp(-(t-T)^2/tau0^2)
  double chirp = 0.0;      // GHz/ns
  double detuning = 0.0;   // GHz, carrier minus |1>-|4> transition at peak
  double t_peak = 0.0;     // ns

  void validate() const;
};

/// Complex amplitudes over the levels with unit norm.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-9;

  /// Throws InputError if the amplitudes are not normalised.
  explicit StateVector(std::vector<Complex> amplitudes);

  /// All population in |1>.
  static StateVector ground(int n_levels);

  /// Wraps integrator output without re-checking the norm; the caller
  /// reports the drift separately.
  static StateVector unchecked(std::vector<Complex> amplitudes) {
    StateVector s;
    s.amplitudes_ = std::move(amplitudes);
    return s;
  }

  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  int size() const { return static_cast<int>(amplitudes_.size()); }
  double norm_squared() const;
  std::vector<double> populations() const;

 private:
  StateVector() = default;

  std::vector<Complex> amplitudes_;
};

double norm_squared(std::span<const Complex> amplitudes);

/// Instantaneous Rabi frequency rabi_peak * exp(-(t - T)^2 / tau0^2).
double rabi_at(double t, const PulseParams& pulse);

/// Rotating-frame Hamiltonian of the four-level system in GHz:
///
///   [ D + w43 + a(t-T)        0                  W/2  W/2 ]
///   [ 0          D + w43 + w21 + a(t-T)          W/2  W/2 ]
///   [ W/2                    W/2                 0    0   ]
///   [ W/2                    W/2                 0    w43 ]
///
/// with D the detuning, a the chirp rate and W = rabi_at(t).
RealMatrix build_hamiltonian(double t, const LevelSystem& system, const PulseParams& pulse);

/// Three-level Lambda analogue: diagonal [D + a(t-T), D + w21 + a(t-T), 0],
/// both ground levels coupled to |3> with W/2.
RealMatrix build_lambda3_hamiltonian(double t, const LevelSystem& system,
                                     const PulseParams& pulse);

/// Dispatches on system.n_levels.
RealMatrix hamiltonian_for(double t, const LevelSystem& system, const PulseParams& pulse);

}  // namespace chirp4
