#include "chirp4/scenario.hpp"

#include <set>

#include <json.hpp>

#include "chirp4/scans.hpp"
#include "chirp4/units.hpp"

namespace chirp4 {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(join(path, key), "unknown key");
  }
}

const json& require_object(const json& parent, const char* key, const std::string& path) {
  if (!parent.contains(key)) fail(join(path, key), "missing section");
  const json& v = parent.at(key);
  if (!v.is_object()) fail(join(path, key), "expected an object");
  return v;
}

double number(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, key, path);
}

std::size_t count(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    fail(path + "." + key, "expected a positive integer");
  }
  return v.get<std::size_t>();
}

// Exactly one of the two keys; returns which one was present.
const char* exactly_one(const json& obj, const char* a, const char* b, const std::string& path) {
  const bool has_a = obj.contains(a);
  const bool has_b = obj.contains(b);
  if (has_a && has_b) {
    fail(path, std::string("ambiguous: both '") + a + "' and '" + b + "' given");
  }
  if (!has_a && !has_b) {
    fail(path, std::string("missing field '") + a + "' (or '" + b + "')");
  }
  return has_a ? a : b;
}

void parse_system(const json& doc, Scenario& s) {
  if (!doc.contains("system")) {
    s.system = presets::rb85_d1();
    return;
  }
  const json& node = doc.at("system");
  if (node.is_string()) {
    const auto name = node.get<std::string>();
    try {
      s.system = presets::by_name(name);
    } catch (const InputError& e) {
      fail("system", e.what());
    }
    s.system_validated = presets::is_validated(name);
    return;
  }
  if (!node.is_object()) fail("system", "expected a preset name or an object");
  reject_unknown(node, "system", {"preset", "omega21", "omega43", "dipole", "n_levels", "label"});

  if (node.contains("preset")) {
    if (!node.at("preset").is_string()) fail("system.preset", "expected a string");
    const auto name = node.at("preset").get<std::string>();
    try {
      s.system = presets::by_name(name);
    } catch (const InputError& e) {
      fail("system.preset", e.what());
    }
    s.system_validated = presets::is_validated(name);
  } else {
    for (const char* key : {"omega21", "omega43", "dipole"}) {
      if (!node.contains(key)) fail(std::string("system.") + key, "missing field (no preset given)");
    }
    s.system.label = "custom";
  }

  bool overridden = false;
  if (auto v = optional_number(node, "omega21", "system")) s.system.omega21 = *v, overridden = true;
  if (auto v = optional_number(node, "omega43", "system")) s.system.omega43 = *v, overridden = true;
  if (auto v = optional_number(node, "dipole", "system")) s.system.dipole = *v, overridden = true;
  if (node.contains("n_levels")) {
    const json& v = node.at("n_levels");
    if (!v.is_number_integer()) fail("system.n_levels", "expected 3 or 4");
    s.system.n_levels = v.get<int>();
    overridden = overridden || s.system.n_levels != 4;
  }
  if (node.contains("label")) {
    if (!node.at("label").is_string()) fail("system.label", "expected a string");
    s.system.label = node.at("label").get<std::string>();
  }
  if (overridden) s.system_validated = false;

  try {
    s.system.validate();
  } catch (const InputError& e) {
    fail("system", e.what());
  }
}

void parse_pulse(const json& doc, Scenario& s) {
  const json& node = require_object(doc, "pulse", "");
  const std::string path = "pulse";
  reject_unknown(node, path, {"rabi_peak", "intensity", "tau0", "fwhm", "chirp", "detuning", "t_peak"});

  PulseParams& p = s.pulse;
  if (std::string_view(exactly_one(node, "rabi_peak", "intensity", path)) == "rabi_peak") {
    p.rabi_peak = number(node, "rabi_peak", path);
    if (!(p.rabi_peak >= 0.0)) fail("pulse.rabi_peak", "must be nonnegative");
  } else {
    const double intensity = number(node, "intensity", path);
    if (!(intensity >= 0.0)) fail("pulse.intensity", "must be nonnegative");
    s.intensity = intensity;
    p.rabi_peak = units::intensity_to_rabi(intensity, s.system.dipole);
  }

  if (std::string_view(exactly_one(node, "tau0", "fwhm", path)) == "tau0") {
    p.tau0 = number(node, "tau0", path);
    if (!(p.tau0 > 0.0)) fail("pulse.tau0", "must be positive");
  } else {
    const double fwhm = number(node, "fwhm", path);
    if (!(fwhm > 0.0)) fail("pulse.fwhm", "must be positive");
    p.tau0 = units::fwhm_to_tau0(fwhm);
  }

  p.chirp = optional_number(node, "chirp", path).value_or(0.0);
  p.detuning = optional_number(node, "detuning", path).value_or(0.0);
  p.t_peak = optional_number(node, "t_peak", path).value_or(0.0);
  try {
    p.validate();
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

void parse_integration(const json& doc, Scenario& s) {
  if (!doc.contains("integration")) return;
  const json& node = require_object(doc, "integration", "");
  const std::string path = "integration";
  reject_unknown(node, path,
                 {"window_sigmas", "rel_tol", "abs_tol", "max_step", "n_samples", "max_norm_drift"});
  IntegrationConfig& c = s.integration;
  if (auto v = optional_number(node, "window_sigmas", path)) c.window_sigmas = *v;
  if (auto v = optional_number(node, "rel_tol", path)) c.rel_tol = *v;
  if (auto v = optional_number(node, "abs_tol", path)) c.abs_tol = *v;
  if (auto v = optional_number(node, "max_step", path)) c.max_step = *v;
  if (auto v = optional_number(node, "max_norm_drift", path)) c.max_norm_drift = *v;
  if (node.contains("n_samples")) {
    const json& v = node.at("n_samples");
    if (!v.is_number_integer()) fail("integration.n_samples", "expected an integer");
    c.n_samples = v.get<int>();
  }
  try {
    c.validate();
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

void parse_sweep(const json& doc, Scenario& s) {
  if (!doc.contains("sweep")) return;
  const json& node = require_object(doc, "sweep", "");
  const std::string path = "sweep";
  reject_unknown(node, path, {"chirp_min", "chirp_max", "n_chirp", "fwhm_min", "fwhm_max", "n_fwhm"});
  SweepSpec& w = s.sweep;
  if (auto v = optional_number(node, "chirp_min", path)) w.chirp_min = *v;
  if (auto v = optional_number(node, "chirp_max", path)) w.chirp_max = *v;
  if (auto v = optional_number(node, "fwhm_min", path)) w.fwhm_min = *v;
  if (auto v = optional_number(node, "fwhm_max", path)) w.fwhm_max = *v;
  if (node.contains("n_chirp")) w.n_chirp = count(node, "n_chirp", path);
  if (node.contains("n_fwhm")) w.n_fwhm = count(node, "n_fwhm", path);
  if (!(w.fwhm_min > 0.0) || !(w.fwhm_max > 0.0)) fail(path, "FWHM range must be positive");
  if (w.chirp_max < w.chirp_min) fail(path, "chirp_max is below chirp_min");
  if (w.fwhm_max < w.fwhm_min) fail(path, "fwhm_max is below fwhm_min");
}

void parse_detuning(const json& doc, Scenario& s) {
  if (!doc.contains("detuning")) return;
  const json& node = require_object(doc, "detuning", "");
  const std::string path = "detuning";
  reject_unknown(node, path, {"values", "min", "max", "count"});
  const bool has_list = node.contains("values");
  const bool has_range = node.contains("min") || node.contains("max") || node.contains("count");
  if (has_list && has_range) fail(path, "ambiguous: both 'values' and a range given");
  if (has_list) {
    const json& v = node.at("values");
    if (!v.is_array() || v.empty()) fail("detuning.values", "expected a nonempty array");
    for (const auto& x : v) {
      if (!x.is_number()) fail("detuning.values", "expected numbers");
      s.deltas.push_back(x.get<double>());
    }
  } else {
    for (const char* key : {"min", "max", "count"}) {
      if (!node.contains(key)) fail(std::string("detuning.") + key, "missing field");
    }
    const double lo = number(node, "min", path);
    const double hi = number(node, "max", path);
    if (hi < lo) fail(path, "max is below min");
    s.deltas = linspace(lo, hi, count(node, "count", path));
  }
}

void parse_output(const json& doc, Scenario& s) {
  if (!doc.contains("output")) return;
  const json& node = require_object(doc, "output", "");
  reject_unknown(node, "output", {"dir", "format"});
  if (node.contains("dir")) {
    if (!node.at("dir").is_string()) fail("output.dir", "expected a string");
    s.output_dir = node.at("dir").get<std::string>();
  }
  if (node.contains("format")) {
    if (!node.at("format").is_string()) fail("output.format", "expected a string");
    try {
      s.format = parse_table_format(node.at("format").get<std::string>());
    } catch (const InputError& e) {
      fail("output.format", e.what());
    }
  }
}

// Rejects repeated keys within one object, which nlohmann would otherwise
// resolve silently to the last value.
json parse_strict(std::string_view text) {
  std::vector<std::set<std::string>> open_objects;
  std::string duplicate;
  json::parser_callback_t check = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        open_objects.emplace_back();
        break;
      case json::parse_event_t::object_end:
        open_objects.pop_back();
        break;
      case json::parse_event_t::key:
        if (!open_objects.back().insert(parsed.get<std::string>()).second && duplicate.empty()) {
          duplicate = parsed.get<std::string>();
        }
        break;
      default:
        break;
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), check, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("syntax error: ") + e.what());
  }
  if (!duplicate.empty()) throw ConfigError(duplicate + ": duplicate key");
  return doc;
}

}  // namespace

std::vector<double> SweepSpec::chirps(const PulseParams& pulse) const {
  if (n_chirp == 1) return {pulse.chirp};
  return linspace(chirp_min, chirp_max, n_chirp);
}

std::vector<double> SweepSpec::fwhms(const PulseParams& pulse) const {
  if (n_fwhm == 1) return {units::tau0_to_fwhm(pulse.tau0)};
  return linspace(fwhm_min, fwhm_max, n_fwhm);
}

Scenario parse_scenario(std::string_view text) {
  const json doc = parse_strict(text);
  if (!doc.is_object()) throw ConfigError("document: expected a JSON object");
  reject_unknown(doc, "", {"system", "pulse", "integration", "sweep", "detuning", "output"});

  Scenario s;
  parse_system(doc, s);
  parse_pulse(doc, s);
  parse_integration(doc, s);
  parse_sweep(doc, s);
  parse_detuning(doc, s);
  parse_output(doc, s);
  return s;
}

}  // namespace chirp4
