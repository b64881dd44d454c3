// Propagation of i dc/dt = 2 pi M(t) c for the three- and four-level models.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chirp4/model.hpp"

namespace chirp4 {

struct IntegrationConfig {
  double window_sigmas = 5.0;  // integrate over T +- window_sigmas * tau0
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  // Upper bound on the internal step; tau0 / 50 when unset. The
  // fast-oscillation bound is applied on top of either value.
  std::optional<double> max_step;
  int n_samples = 2000;
  // Largest accepted | |c|^2 - 1 | before the run is declared failed.
  double max_norm_drift = 1e-8;

  void validate() const;
};

/// Integration did not reach the end of the window, or lost unitarity.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " (t = " + std::to_string(time) + " ns)"), time_(time) {}

  /// Time in ns at which integration stopped.
  double time() const { return time_; }

 private:
  double time_;
};

struct Trajectory {
  std::vector<double> times;                     // ns, uniform grid over the window
  std::vector<std::vector<double>> populations;  // one tuple per sample
  std::vector<double> norms;                     // |c|^2 per sample
  StateVector final_state = StateVector::ground(1);
  double norm_drift = 0.0;  // max | |c|^2 - 1 | over all accepted steps
  long accepted_steps = 0;
};

/// Integration interval [T - k tau0, T + k tau0].
struct Window {
  double start;
  double end;
};
Window integration_window(const PulseParams& pulse, const IntegrationConfig& config);

/// Step bound actually used: min(max_step or tau0/50, 0.05 / fastest rate),
/// where the fastest rate is |D| + w21 + w43 + W + |a| * (half window).
double effective_max_step(const LevelSystem& system, const PulseParams& pulse,
                          const IntegrationConfig& config);

/// Propagates `initial` across the integration window. Uses the four-level
/// Hamiltonian or its Lambda analogue depending on system.n_levels.
Trajectory propagate(const LevelSystem& system, const PulseParams& pulse,
                     const IntegrationConfig& config, const StateVector& initial);

/// Same, starting from |1>.
Trajectory propagate(const LevelSystem& system, const PulseParams& pulse,
                     const IntegrationConfig& config = {});

/// |c_i|^2 of the final state.
std::vector<double> final_populations(const Trajectory& traj);

}  // namespace chirp4
