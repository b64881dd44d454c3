// Parameter sweeps over independent propagations.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chirp4/integrator.hpp"
#include "chirp4/model.hpp"

namespace chirp4 {

struct CellResult {
  std::vector<double> populations;  // final |c_i|^2; empty when failed
  bool ok = true;
  std::string diagnostic;
};

enum class SweepKind { ChirpFwhm, Detuning };

/// Final populations over a rectangular grid. Cells are stored row-major
/// with x varying fastest: cells[iy * x_axis.size() + ix].
struct SweepGrid {
  SweepKind kind = SweepKind::ChirpFwhm;
  std::vector<double> x_axis;  // chirp (GHz/ns) or detuning (GHz)
  std::vector<double> y_axis;  // FWHM (ns); one entry for detuning scans
  std::vector<CellResult> cells;
  LevelSystem system;
  PulseParams pulse_template;
  IntegrationConfig config;

  const CellResult& at(std::size_t ix, std::size_t iy) const {
    return cells[iy * x_axis.size() + ix];
  }
  std::size_t failed_count() const;
};

/// 0 selects std::thread::hardware_concurrency().
struct SweepOptions {
  unsigned threads = 0;
};

/// Evenly spaced values including both end points; a single point gives `lo`.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Pulse used for cell (chirp, fwhm): the template with chirp and tau0
/// overridden.
PulseParams chirp_fwhm_cell_pulse(const PulseParams& pulse_template, double chirp, double fwhm);

SweepGrid sweep_chirp_fwhm(const LevelSystem& system, const PulseParams& pulse_template,
                           const std::vector<double>& chirps, const std::vector<double>& fwhms,
                           const IntegrationConfig& config, SweepOptions options = {});

/// Final populations as a function of the one-photon detuning. The y-axis
/// holds the template's FWHM.
SweepGrid detuning_scan(const LevelSystem& system, const PulseParams& pulse_template,
                        const std::vector<double>& deltas, const IntegrationConfig& config,
                        SweepOptions options = {});

/// Runs `task(i)` for i in [0, count) on a pool of workers pulling indices
/// from a shared counter. Exceptions from tasks propagate after all workers
/// finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace chirp4
