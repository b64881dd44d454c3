#include "chirp4/commands.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "chirp4/units.hpp"

namespace chirp4 {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string level_column(std::size_t i) { return "P" + std::to_string(i + 1); }

int levels_of(const SweepGrid& grid) { return grid.system.n_levels; }

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to " + path.string() + " failed");
}

void append_cell(std::vector<Field>& row, const CellResult& cell, int n_levels) {
  for (int i = 0; i < n_levels; ++i) {
    row.emplace_back(cell.ok ? cell.populations[static_cast<std::size_t>(i)] : std::nan(""));
  }
  row.emplace_back(std::string(cell.ok ? "ok" : "failed"));
}

void report_failures(const SweepGrid& grid, std::ostream& err) {
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const auto& cell = grid.cells[i];
    if (cell.ok) continue;
    err << "cell (x = " << format_number(grid.x_axis[i % grid.x_axis.size()])
        << ", y = " << format_number(grid.y_axis[i / grid.x_axis.size()])
        << ") failed: " << cell.diagnostic << "\n";
  }
}

ordered_json flag_json(const ValidityFlag& f) {
  return {{"ratio", f.ratio}, {"satisfied", f.satisfied}, {"strong", f.strong}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "trace") return Command::Trace;
  if (name == "sweep") return Command::Sweep;
  if (name == "detuning") return Command::Detuning;
  if (name == "compare3") return Command::Compare3;
  if (name == "check") return Command::Check;
  throw InputError("unknown subcommand '" + std::string(name) + "'");
}

const char* command_name(Command command) {
  switch (command) {
    case Command::Trace: return "trace";
    case Command::Sweep: return "sweep";
    case Command::Detuning: return "detuning";
    case Command::Compare3: return "compare3";
    case Command::Check: return "check";
  }
  return "?";
}

std::pair<std::size_t, std::size_t> parse_grid(std::string_view text) {
  std::size_t sep = std::string_view::npos;
  std::size_t sep_len = 1;
  if (auto p = text.find("\xC3\x97"); p != std::string_view::npos) {
    sep = p;
    sep_len = 2;
  } else {
    sep = text.find_first_of("xX");
  }
  if (sep == std::string_view::npos) throw InputError("grid must look like NXxNY, got '" + std::string(text) + "'");

  auto to_count = [&](std::string_view part) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size() || value == 0) {
      throw InputError("grid must look like NXxNY with positive counts, got '" + std::string(text) + "'");
    }
    return value;
  };
  return {to_count(text.substr(0, sep)), to_count(text.substr(sep + sep_len))};
}

Table trace_table(const Trajectory& traj) {
  Table t;
  t.header.push_back("t_ns");
  const std::size_t n = traj.populations.empty() ? 0 : traj.populations.front().size();
  for (std::size_t i = 0; i < n; ++i) t.header.push_back(level_column(i));
  t.header.push_back("norm");
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<Field> row{traj.times[k]};
    for (double p : traj.populations[k]) row.emplace_back(p);
    row.emplace_back(traj.norms[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table sweep_table(const SweepGrid& grid) {
  Table t;
  t.header = {"chirp_GHz_per_ns", "fwhm_ns"};
  for (int i = 0; i < levels_of(grid); ++i) t.header.push_back(level_column(static_cast<std::size_t>(i)));
  t.header.push_back("status");
  for (std::size_t iy = 0; iy < grid.y_axis.size(); ++iy) {
    for (std::size_t ix = 0; ix < grid.x_axis.size(); ++ix) {
      std::vector<Field> row{grid.x_axis[ix], grid.y_axis[iy]};
      append_cell(row, grid.at(ix, iy), levels_of(grid));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table sweep_level_grid(const SweepGrid& grid, std::size_t level) {
  Table t;
  t.header.push_back("fwhm_ns");
  for (double x : grid.x_axis) t.header.push_back(format_number(x));
  for (std::size_t iy = 0; iy < grid.y_axis.size(); ++iy) {
    std::vector<Field> row{grid.y_axis[iy]};
    for (std::size_t ix = 0; ix < grid.x_axis.size(); ++ix) {
      const auto& cell = grid.at(ix, iy);
      row.emplace_back(cell.ok ? cell.populations[level] : std::nan(""));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table detuning_table(const SweepGrid& grid) {
  Table t;
  t.header.push_back("delta_GHz");
  for (int i = 0; i < levels_of(grid); ++i) t.header.push_back(level_column(static_cast<std::size_t>(i)));
  t.header.push_back("status");
  for (std::size_t ix = 0; ix < grid.x_axis.size(); ++ix) {
    std::vector<Field> row{grid.x_axis[ix]};
    append_cell(row, grid.at(ix, 0), levels_of(grid));
    t.rows.push_back(std::move(row));
  }
  return t;
}

ordered_json to_json(const AdiabaticityReport& r) {
  return {
      {"chirp_bandwidth_product", r.chirp_bandwidth_product},
      {"chirp_condition_met", r.chirp_condition_met},
      {"lz_ratio", r.lz_ratio},
      {"lz_condition_met", r.lz_condition_met},
      {"lz_strong", r.lz_strong},
      {"spectral_width", r.spectral_width},
      {"broadband", r.broadband},
  };
}

ordered_json to_json(const ComparisonReport& r) {
  return {
      {"p_final_4lvl", r.p_final_4lvl},
      {"p_final_3lvl", r.p_final_3lvl},
      {"delta_p2", r.delta_p2},
      {"validity_flags",
       {{"chirp_vs_omega43", flag_json(r.chirp_vs_omega43)},
        {"rabi_vs_omega43", flag_json(r.rabi_vs_omega43)},
        {"lambda_valid", r.lambda_valid()}}},
  };
}

ordered_json scenario_metadata(Command command, const Scenario& s) {
  ordered_json system{
      {"label", s.system.label},
      {"omega21", s.system.omega21},
      {"omega43", s.system.omega43},
      {"dipole", s.system.dipole},
      {"n_levels", s.system.n_levels},
      {"validated", s.system_validated},
  };
  ordered_json pulse{
      {"rabi_peak", s.pulse.rabi_peak},
      {"tau0", s.pulse.tau0},
      {"fwhm", units::tau0_to_fwhm(s.pulse.tau0)},
      {"chirp", s.pulse.chirp},
      {"detuning", s.pulse.detuning},
      {"t_peak", s.pulse.t_peak},
  };
  if (s.intensity) pulse["intensity"] = *s.intensity;
  ordered_json integration{
      {"window_sigmas", s.integration.window_sigmas},
      {"rel_tol", s.integration.rel_tol},
      {"abs_tol", s.integration.abs_tol},
      {"max_step", s.integration.max_step ? ordered_json(*s.integration.max_step) : ordered_json()},
      {"n_samples", s.integration.n_samples},
  };
  return {{"command", command_name(command)},
          {"system", system},
          {"pulse", pulse},
          {"integration", integration}};
}

int dispatch(Command command, const Scenario& scenario, const RunOptions& options,
             std::ostream& err) {
  const fs::path out_dir = options.out_dir.value_or(fs::path(scenario.output_dir));
  const TableFormat format = options.format.value_or(scenario.format);
  const std::string ext = extension(format);

  try {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    ordered_json meta = scenario_metadata(command, scenario);

    switch (command) {
      case Command::Trace: {
        const Trajectory traj = propagate(scenario.system, scenario.pulse, scenario.integration);
        meta["norm_drift"] = traj.norm_drift;
        write_file(out_dir / ("trace" + ext), emit_table(trace_table(traj), format));
        break;
      }
      case Command::Sweep: {
        SweepSpec spec = scenario.sweep;
        if (options.grid) std::tie(spec.n_chirp, spec.n_fwhm) = *options.grid;
        const SweepGrid grid = sweep_chirp_fwhm(scenario.system, scenario.pulse,
                                                spec.chirps(scenario.pulse),
                                                spec.fwhms(scenario.pulse), scenario.integration,
                                                {options.threads});
        report_failures(grid, err);
        meta["failed_cells"] = grid.failed_count();
        write_file(out_dir / ("sweep" + ext), emit_table(sweep_table(grid), format));
        for (int i = 0; i < scenario.system.n_levels; ++i) {
          const auto level = static_cast<std::size_t>(i);
          write_file(out_dir / ("sweep_" + level_column(level) + ext),
                     emit_table(sweep_level_grid(grid, level), format));
        }
        break;
      }
      case Command::Detuning: {
        if (scenario.deltas.empty()) {
          throw ConfigError("detuning: no detuning values configured");
        }
        const SweepGrid grid = detuning_scan(scenario.system, scenario.pulse, scenario.deltas,
                                             scenario.integration, {options.threads});
        report_failures(grid, err);
        meta["failed_cells"] = grid.failed_count();
        write_file(out_dir / ("detuning" + ext), emit_table(detuning_table(grid), format));
        break;
      }
      case Command::Compare3: {
        const ComparisonReport report =
            compare_yields(scenario.system, scenario.pulse, scenario.integration);
        write_file(out_dir / "report.json", dump(to_json(report)));
        break;
      }
      case Command::Check: {
        write_file(out_dir / "report.json",
                   dump(to_json(adiabaticity_report(scenario.system, scenario.pulse))));
        break;
      }
    }
    write_file(out_dir / "meta.json", dump(meta));
    return kExitOk;
  } catch (const IntegrationError& e) {
    err << "integration failed: " << e.what() << "\n";
    return kExitIntegrationError;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInputError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIoError;
  }
}

}  // namespace chirp4
