#include "chirp4/integrator.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace chirp4 {
namespace {

using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 4, 1>;

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSafety = 0.9;
constexpr int kMaxFailedTries = 500;

// Fourth-order Magnus step for i dc/dt = 2 pi M(t) c using the two-point
// Gauss-Legendre rule:
//   c(t + h) = exp(-i K) c(t),
//   K = pi h (M1 + M2) - i (sqrt3 / 3) pi^2 h^2 [M2, M1].
// K is Hermitian, so the exponential is evaluated through its eigenbasis and
// the step is unitary up to rounding.
class MagnusStepper {
 public:
  MagnusStepper(const LevelSystem& system, const PulseParams& pulse)
      : system_(system), pulse_(pulse) {}

  ComplexVector step(double t, double h, const ComplexVector& c) {
    const double t1 = t + h * (0.5 - kSqrt3 / 6.0);
    const double t2 = t + h * (0.5 + kSqrt3 / 6.0);
    const RealMatrix m1 = hamiltonian_for(t1, system_, pulse_);
    const RealMatrix m2 = hamiltonian_for(t2, system_, pulse_);
    const RealMatrix commutator = m2 * m1 - m1 * m2;

    const ComplexMatrix k = (kPi * h * (m1 + m2)).cast<Complex>() -
                            Complex(0.0, kSqrt3 / 3.0 * kPi * kPi * h * h) *
                                commutator.cast<Complex>();
    solver_.compute(k);
    const auto& v = solver_.eigenvectors();
    ComplexVector phases = solver_.eigenvalues().unaryExpr(
        [](double lambda) { return std::polar(1.0, -lambda); });
    return v * phases.cwiseProduct(v.adjoint() * c);
  }

 private:
  const LevelSystem& system_;
  const PulseParams& pulse_;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver_;
};

std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::vector<double> populations_of(const ComplexVector& c) {
  std::vector<double> p(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(c[i]);
  return p;
}

}  // namespace

void IntegrationConfig::validate() const {
  if (!(window_sigmas >= 3.0)) throw InputError("window_sigmas must be at least 3");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InputError("tolerances must be positive");
  if (max_step && !(*max_step > 0.0)) throw InputError("max_step must be positive");
  if (n_samples < 2) throw InputError("n_samples must be at least 2");
  if (!(max_norm_drift > 0.0)) throw InputError("max_norm_drift must be positive");
}

Window integration_window(const PulseParams& pulse, const IntegrationConfig& config) {
  const double half = config.window_sigmas * pulse.tau0;
  return {pulse.t_peak - half, pulse.t_peak + half};
}

double effective_max_step(const LevelSystem& system, const PulseParams& pulse,
                          const IntegrationConfig& config) {
  const double half_window = config.window_sigmas * pulse.tau0;
  const double fastest = std::abs(pulse.detuning) + system.omega21 + system.omega43 +
                         pulse.rabi_peak + std::abs(pulse.chirp) * half_window;
  const double base = config.max_step.value_or(pulse.tau0 / 50.0);
  return std::min(base, 0.05 / fastest);
}

Trajectory propagate(const LevelSystem& system, const PulseParams& pulse,
                     const IntegrationConfig& config, const StateVector& initial) {
  system.validate();
  pulse.validate();
  config.validate();
  if (initial.size() != system.n_levels) {
    throw InputError("initial state has " + std::to_string(initial.size()) +
                     " amplitudes, system has " + std::to_string(system.n_levels) + " levels");
  }

  const Window window = integration_window(pulse, config);
  const double max_dt = effective_max_step(system, pulse, config);
  const double span = window.end - window.start;
  const double min_dt = 64.0 * std::numeric_limits<double>::epsilon() * span;

  MagnusStepper stepper(system, pulse);

  Trajectory traj;
  const auto n_samples = static_cast<std::size_t>(config.n_samples);
  traj.times.resize(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    traj.times[k] = window.start + span * static_cast<double>(k) / static_cast<double>(n_samples - 1);
  }
  traj.times.back() = window.end;
  traj.populations.reserve(n_samples);
  traj.norms.reserve(n_samples);

  ComplexVector c = Eigen::Map<const ComplexVector>(initial.amplitudes().data(), initial.size());
  auto record = [&traj](const ComplexVector& state) {
    traj.populations.push_back(populations_of(state));
    traj.norms.push_back(state.squaredNorm());
  };
  record(c);
  traj.norm_drift = std::abs(traj.norms.back() - 1.0);

  // Step doubling: one step of h against two of h/2. The two half steps are
  // kept; their difference from the full step is 15x their own error for a
  // fourth-order method.
  double t = window.start;
  double h = max_dt;
  for (std::size_t k = 1; k < n_samples; ++k) {
    const double target = traj.times[k];
    while (target - t > min_dt) {
      bool clipped = t + h >= target;
      double trial = clipped ? target - t : h;
      for (int failures = 0;; ++failures) {
        if (failures > kMaxFailedTries || trial < min_dt) {
          throw IntegrationError("step size control failed", t);
        }
        const ComplexVector full = stepper.step(t, trial, c);
        const ComplexVector half = stepper.step(t, 0.5 * trial, c);
        const ComplexVector both = stepper.step(t + 0.5 * trial, 0.5 * trial, half);

        const double err = (both - full).cwiseAbs().maxCoeff() / 15.0;
        const double scale = config.abs_tol + config.rel_tol * both.cwiseAbs().maxCoeff();
        const double ratio = err / scale;
        const double grow = ratio > 0.0 ? kSafety * std::pow(ratio, -0.2) : 5.0;

        if (ratio <= 1.0) {
          c = both;
          t = clipped ? target : t + trial;
          const double proposal = std::min(trial * std::min(grow, 5.0), max_dt);
          if (!clipped || proposal > h) h = proposal;
          break;
        }
        trial *= std::max(grow, 0.2);
        clipped = false;
      }
      ++traj.accepted_steps;

      const double drift = std::abs(c.squaredNorm() - 1.0);
      traj.norm_drift = std::max(traj.norm_drift, drift);
      if (!std::isfinite(drift) || drift > config.max_norm_drift) {
        throw IntegrationError("norm drift " + format_sci(drift) + " exceeds tolerance", t);
      }
    }
    t = target;
    record(c);
  }

  traj.final_state = StateVector::unchecked(std::vector<Complex>(c.begin(), c.end()));
  return traj;
}

Trajectory propagate(const LevelSystem& system, const PulseParams& pulse,
                     const IntegrationConfig& config) {
  return propagate(system, pulse, config, StateVector::ground(system.n_levels));
}

std::vector<double> final_populations(const Trajectory& traj) {
  return traj.final_state.populations();
}

}  // namespace chirp4
