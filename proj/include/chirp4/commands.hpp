// Subcommands of the chirp4 command-line tool and the tables they write.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "chirp4/analysis.hpp"
#include "chirp4/integrator.hpp"
#include "chirp4/scans.hpp"
#include "chirp4/scenario.hpp"
#include "chirp4/table.hpp"

namespace chirp4 {

enum class Command { Trace, Sweep, Detuning, Compare3, Check };

Command parse_command(std::string_view name);
const char* command_name(Command command);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides scenario.output_dir
  unsigned threads = 0;
  std::optional<std::pair<std::size_t, std::size_t>> grid;  // NX x NY for sweep
  std::optional<TableFormat> format;                        // overrides scenario.format
};

/// Accepts "101x81", "101X81" or "101×81".
std::pair<std::size_t, std::size_t> parse_grid(std::string_view text);

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitIoError = 2,
  kExitIntegrationError = 3,
};

/// Runs one subcommand and writes its artifacts:
///   trace     trace.csv     t_ns, P1..Pn, norm
///   sweep     sweep.csv     chirp_GHz_per_ns, fwhm_ns, P1..Pn, status
///             sweep_P<i>.csv  row-major grid per level (rows FWHM, columns chirp)
///   detuning  detuning.csv  delta_GHz, P1..Pn, status
///   compare3  report.json   ComparisonReport
///   check     report.json   AdiabaticityReport
/// plus meta.json describing the resolved scenario. Diagnostics go to `err`.
int dispatch(Command command, const Scenario& scenario, const RunOptions& options,
             std::ostream& err);

Table trace_table(const Trajectory& traj);
Table sweep_table(const SweepGrid& grid);
Table sweep_level_grid(const SweepGrid& grid, std::size_t level);
Table detuning_table(const SweepGrid& grid);

nlohmann::ordered_json to_json(const AdiabaticityReport& report);
nlohmann::ordered_json to_json(const ComparisonReport& report);
nlohmann::ordered_json scenario_metadata(Command command, const Scenario& scenario);

}  // namespace chirp4
