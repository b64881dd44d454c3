#include "chirp4/scans.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "chirp4/units.hpp"

namespace chirp4 {
namespace {

CellResult run_cell(const LevelSystem& system, const PulseParams& pulse,
                    const IntegrationConfig& config) {
  CellResult cell;
  try {
    cell.populations = final_populations(propagate(system, pulse, config));
  } catch (const IntegrationError& e) {
    cell.ok = false;
    cell.diagnostic = e.what();
  }
  return cell;
}

void require_nonempty(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw InputError(std::string(name) + " axis is empty");
}

}  // namespace

std::size_t SweepGrid::failed_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return !c.ok; }));
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> v(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + step * static_cast<double>(i);
  v.back() = hi;
  return v;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
}

PulseParams chirp_fwhm_cell_pulse(const PulseParams& pulse_template, double chirp, double fwhm) {
  PulseParams p = pulse_template;
  p.chirp = chirp;
  p.tau0 = units::fwhm_to_tau0(fwhm);
  return p;
}

SweepGrid sweep_chirp_fwhm(const LevelSystem& system, const PulseParams& pulse_template,
                           const std::vector<double>& chirps, const std::vector<double>& fwhms,
                           const IntegrationConfig& config, SweepOptions options) {
  require_nonempty(chirps, "chirp");
  require_nonempty(fwhms, "fwhm");
  system.validate();
  config.validate();
  for (double f : fwhms) {
    if (!(f > 0.0)) throw InputError("fwhm values must be positive");
  }

  SweepGrid grid{SweepKind::ChirpFwhm, chirps, fwhms, {}, system, pulse_template, config};
  grid.cells.resize(chirps.size() * fwhms.size());
  parallel_for(grid.cells.size(), options.threads, [&](std::size_t i) {
    const std::size_t ix = i % chirps.size();
    const std::size_t iy = i / chirps.size();
    grid.cells[i] = run_cell(system, chirp_fwhm_cell_pulse(pulse_template, chirps[ix], fwhms[iy]),
                             config);
  });
  return grid;
}

SweepGrid detuning_scan(const LevelSystem& system, const PulseParams& pulse_template,
                        const std::vector<double>& deltas, const IntegrationConfig& config,
                        SweepOptions options) {
  require_nonempty(deltas, "detuning");
  system.validate();
  pulse_template.validate();
  config.validate();

  SweepGrid grid{SweepKind::Detuning, deltas, {units::tau0_to_fwhm(pulse_template.tau0)},
                 {}, system, pulse_template, config};
  grid.cells.resize(deltas.size());
  parallel_for(deltas.size(), options.threads, [&](std::size_t i) {
    PulseParams p = pulse_template;
    p.detuning = deltas[i];
    grid.cells[i] = run_cell(system, p, config);
  });
  return grid;
}

}  // namespace chirp4
