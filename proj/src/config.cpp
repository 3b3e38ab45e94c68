#include "optocorr/config.hpp"

#include "optocorr/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

namespace optocorr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string where(std::string_view key, const ConfigEntry& e) {
  std::string out = "key '" + std::string(key) + "'";
  if (e.line > 0) out += " (line " + std::to_string(e.line) + ")";
  else out += " (command line)";
  return out;
}

const KeyInfo* find_key(std::string_view name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

// Parses a plain decimal number, distinguishing unit suffixes from garbage.
double parse_plain(std::string_view text, std::string_view key, const ConfigEntry& e) {
  text = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || text.empty()) {
    throw Error(ErrorKind::ParseError, where(key, e) + ": '" + e.value + "' is not a number");
  }
  const std::string_view rest = trim(std::string_view(ptr, text.data() + text.size() - ptr));
  if (!rest.empty()) {
    if (std::isalpha(static_cast<unsigned char>(rest.front()))) {
      throw Error(ErrorKind::UnitError, where(key, e) + ": unit '" + std::string(rest) +
                                            "' not accepted; give a bare number in SI units (rates in rad/s)");
    }
    throw Error(ErrorKind::ParseError, where(key, e) + ": trailing text '" + std::string(rest) + "'");
  }
  if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, where(key, e) + ": value must be finite");
  return v;
}

bool has(const ConfigMap& m, std::string_view key) { return m.find(key) != m.end(); }

double number(const ConfigMap& m, std::string_view key) {
  const auto it = m.find(key);
  if (it == m.end()) throw Error(ErrorKind::MissingKey, "missing required key '" + std::string(key) + "'");
  return parse_value(key, it->second);
}

double number_or(const ConfigMap& m, std::string_view key, double fallback) {
  return has(m, key) ? number(m, key) : fallback;
}

std::string text(const ConfigMap& m, std::string_view key) {
  const auto it = m.find(key);
  if (it == m.end()) throw Error(ErrorKind::MissingKey, "missing required key '" + std::string(key) + "'");
  return it->second.value;
}

int integer(const ConfigMap& m, std::string_view key) {
  const double v = number(m, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw Error(ErrorKind::ParseError, where(key, m.find(key)->second) + ": expected an integer");
  }
  return static_cast<int>(v);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

PairLabel parse_pair(std::string_view s) {
  for (PairLabel p : kAllPairs)
    if (to_string(p) == s) return p;
  throw Error(ErrorKind::InvalidSpec, "unknown pair '" + std::string(s) + "' (use mo1, mo2, o1o2)");
}

RunMode parse_mode(const std::string& s) {
  if (s == "point") return RunMode::Point;
  if (s == "sweep") return RunMode::Sweep;
  if (s == "preset") return RunMode::Preset;
  if (s == "physical-convert") return RunMode::PhysicalConvert;
  throw Error(ErrorKind::ParseError, "unknown mode '" + s + "' (point, sweep, preset, physical-convert)");
}

void restrict_keys(const ConfigMap& m, RunMode mode, std::initializer_list<std::string_view> allowed) {
  static const std::set<std::string_view> common = {"mode", "out", "verbose"};
  for (const auto& [key, entry] : m) {
    if (common.count(key)) continue;
    if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
    throw Error(ErrorKind::ParseError, where(key, entry) + " is not used in " +
                                           std::string(to_string(mode)) + " mode");
  }
}

// n_th from either nth or T (T needs omega_m).
double resolve_nth(const ConfigMap& m, double omega_m) {
  if (has(m, "nth")) {
    const double v = number(m, "nth");
    if (v < 0) throw Error(ErrorKind::InvalidSpec, "nth must be non-negative");
    return v;
  }
  if (has(m, "T")) {
    if (!(omega_m > 0)) throw Error(ErrorKind::MissingKey, "missing required key 'omega_m' (needed to convert T)");
    const double t = number(m, "T");
    if (t < 0) throw Error(ErrorKind::InvalidSpec, "T must be non-negative");
    return thermal_occupancy(t, omega_m);
  }
  throw Error(ErrorKind::MissingKey, "missing required key 'nth' (or 'T')");
}

double resolve_ratio(const ConfigMap& m, double c1) {
  if (has(m, "C2") && has(m, "ratio")) {
    throw Error(ErrorKind::ParseError, "keys 'C2' and 'ratio' are mutually exclusive");
  }
  if (has(m, "C2")) {
    const double c2 = number(m, "C2");
    if (c1 > 0) return c2 / c1;
    if (c2 == 0) return 2.0;
    throw Error(ErrorKind::InvalidSpec, "C2 > 0 with C1 = 0 cannot be expressed as a ratio");
  }
  return number_or(m, "ratio", 2.0);
}

void apply_pairs(const ConfigMap& m, SweepSpec& s) {
  if (!has(m, "pairs")) return;
  s.pairs.clear();
  for (const auto& item : split_list(text(m, "pairs"))) s.pairs.push_back(parse_pair(item));
}

}  // namespace

std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::Point: return "point";
    case RunMode::Sweep: return "sweep";
    case RunMode::Preset: return "preset";
    case RunMode::PhysicalConvert: return "physical-convert";
  }
  return "?";
}

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = {
      {"mode", KeyKind::Text, "point | sweep | preset | physical-convert (default point)"},
      {"out", KeyKind::Text, "output CSV file (sweep, point) or directory (preset)"},
      {"verbose", KeyKind::Integer, "diagnostic level on stderr"},
      {"preset", KeyKind::Text, "fig2 ... fig7"},
      {"curves", KeyKind::Text, "preset curve values, comma separated (r or C1)"},
      {"sweep", KeyKind::Text, "swept variable: T, r or C1"},
      {"lo", KeyKind::Number, "sweep start (K for T)"},
      {"hi", KeyKind::Number, "sweep end (K for T)"},
      {"points", KeyKind::Integer, "grid points (default 400)"},
      {"scale", KeyKind::Text, "linear | log (default log for T and C1, linear for r)"},
      {"pairs", KeyKind::Text, "subset of mo1,mo2,o1o2 (default all)"},
      {"kappa1", KeyKind::Rate, "cavity 1 decay rate, rad/s"},
      {"kappa2", KeyKind::Rate, "cavity 2 decay rate, rad/s"},
      {"gamma", KeyKind::Rate, "mechanical damping, rad/s"},
      {"omega_m", KeyKind::Rate, "mechanical frequency, rad/s"},
      {"C1", KeyKind::Number, "cooperativity of cavity 1"},
      {"C2", KeyKind::Number, "cooperativity of cavity 2 (alternative to ratio)"},
      {"ratio", KeyKind::Number, "C2 / C1 (default 2)"},
      {"nth", KeyKind::Number, "mirror bath occupancy"},
      {"T", KeyKind::Number, "mirror bath temperature, K"},
      {"r", KeyKind::Number, "squeezing parameter"},
      {"wavelength1", KeyKind::Number, "laser 1 wavelength, m"},
      {"wavelength2", KeyKind::Number, "laser 2 wavelength, m"},
      {"power1", KeyKind::Number, "laser 1 power, W"},
      {"power2", KeyKind::Number, "laser 2 power, W"},
      {"length1", KeyKind::Number, "cavity 1 length, m"},
      {"length2", KeyKind::Number, "cavity 2 length, m"},
      {"omega_c1", KeyKind::Rate, "cavity 1 frequency, rad/s"},
      {"omega_c2", KeyKind::Rate, "cavity 2 frequency, rad/s"},
      {"mass", KeyKind::Number, "effective mirror mass, kg"},
  };
  return keys;
}

ConfigMap parse_config_text(std::string_view doc) {
  ConfigMap out;
  int line_no = 0;
  for (bool more = true; more;) {
    ++line_no;
    const auto nl = doc.find('\n');
    std::string_view line = doc.substr(0, nl);
    more = nl != std::string_view::npos;
    if (more) doc.remove_prefix(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    // Strip a trailing comment that is not inside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      else if (line[i] == '#' && !quoted) { line = line.substr(0, i); break; }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string ctx = "line " + std::to_string(line_no);

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ParseError, ctx + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::ParseError, ctx + ": missing key before '='");
    if (!find_key(key)) {
      throw Error(ErrorKind::UnknownKey, ctx + ": unknown key '" + std::string(key) + "'");
    }
    if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') {
        throw Error(ErrorKind::ParseError, ctx + ": unterminated string for key '" + std::string(key) + "'");
      }
      value = value.substr(1, value.size() - 2);
    }
    if (value.empty()) {
      throw Error(ErrorKind::ParseError, ctx + ": empty value for key '" + std::string(key) + "'");
    }
    const auto [it, inserted] = out.emplace(std::string(key), ConfigEntry{std::string(value), line_no});
    if (!inserted) {
      throw Error(ErrorKind::ParseError, ctx + ": duplicate key '" + std::string(key) +
                                             "' (first set on line " + std::to_string(it->second.line) + ")");
    }
  }
  return out;
}

double parse_value(std::string_view key, const ConfigEntry& entry) {
  const KeyInfo* info = find_key(key);
  if (!info) throw Error(ErrorKind::UnknownKey, "unknown key '" + std::string(key) + "'");
  std::string_view v = trim(entry.value);
  const bool shorthand = v.substr(0, 3) == "2pi";
  if (shorthand) {
    if (info->kind != KeyKind::Rate) {
      throw Error(ErrorKind::UnitError, where(key, entry) + ": the 2pi* shorthand is only accepted for rates");
    }
    v = trim(v.substr(3));
    if (v.empty() || v.front() != '*') {
      throw Error(ErrorKind::ParseError, where(key, entry) + ": expected '2pi*<number>'");
    }
    return constants::kTwoPi * parse_plain(v.substr(1), key, entry);
  }
  return parse_plain(v, key, entry);
}

RunConfig resolve_config(const ConfigMap& file, const ConfigMap& overrides) {
  ConfigMap m = file;
  if (has(m, "T") && has(m, "nth")) {
    throw Error(ErrorKind::ParseError, "keys 'T' (line " + std::to_string(m["T"].line) +
                                           ") and 'nth' (line " + std::to_string(m["nth"].line) +
                                           ") conflict; give one of them");
  }
  if (has(overrides, "T") && has(overrides, "nth")) {
    throw Error(ErrorKind::ParseError, "--T and --nth conflict; give one of them");
  }
  for (const auto& [key, entry] : overrides) {
    if (!find_key(key)) throw Error(ErrorKind::UnknownKey, "unknown key '" + key + "'");
    if (key == "T") m.erase("nth");
    if (key == "nth") m.erase("T");
    if (key == "C2") m.erase("ratio");
    if (key == "ratio") m.erase("C2");
    m[key] = entry;
  }

  RunConfig cfg;
  cfg.mode = parse_mode(has(m, "mode") ? text(m, "mode") : (has(m, "preset") ? "preset" : "point"));
  if (has(m, "out")) cfg.out = text(m, "out");
  if (has(m, "verbose")) cfg.verbosity = integer(m, "verbose");

  switch (cfg.mode) {
    case RunMode::Point: {
      restrict_keys(m, cfg.mode, {"kappa1", "kappa2", "gamma", "omega_m", "C1", "C2", "ratio",
                                  "nth", "T", "r", "pairs"});
      SweepSpec& s = cfg.spec;
      s.variable = SweepVariable::C1;
      s.kappa1 = number(m, "kappa1");
      s.kappa2 = number(m, "kappa2");
      s.gamma_m = number(m, "gamma");
      s.omega_m = number_or(m, "omega_m", 0);
      s.C1 = number(m, "C1");
      s.c2_ratio = resolve_ratio(m, s.C1);
      s.r = number(m, "r");
      s.n_th = resolve_nth(m, s.omega_m);
      apply_pairs(m, s);
      s.lo = 0;
      s.hi = std::max(1.0, 2 * s.C1);
      s.points = 2;
      s.scale = GridScale::Linear;
      s.validate();
      cfg.point_value = s.C1;
      break;
    }
    case RunMode::Sweep: {
      restrict_keys(m, cfg.mode, {"sweep", "lo", "hi", "points", "scale", "pairs", "kappa1",
                                  "kappa2", "gamma", "omega_m", "C1", "C2", "ratio", "nth", "T",
                                  "r"});
      SweepSpec& s = cfg.spec;
      s.variable = parse_sweep_variable(text(m, "sweep"));
      s.lo = number(m, "lo");
      s.hi = number(m, "hi");
      s.points = has(m, "points") ? integer(m, "points") : 400;
      s.scale = has(m, "scale") ? parse_grid_scale(text(m, "scale"))
                                : (s.variable == SweepVariable::r ? GridScale::Linear : GridScale::Log);
      s.kappa1 = number(m, "kappa1");
      s.kappa2 = number(m, "kappa2");
      s.gamma_m = number(m, "gamma");
      s.omega_m = number_or(m, "omega_m", 0);
      const auto swept_given = [&](std::initializer_list<std::string_view> keys) {
        for (auto k : keys)
          if (has(m, k)) {
            throw Error(ErrorKind::InvalidSpec, "key '" + std::string(k) + "' fixes the swept variable " +
                                                    std::string(to_string(s.variable)));
          }
      };
      if (s.variable == SweepVariable::T) {
        swept_given({"T", "nth"});
        if (!(s.omega_m > 0)) throw Error(ErrorKind::MissingKey, "missing required key 'omega_m'");
      } else {
        s.n_th = resolve_nth(m, s.omega_m);
      }
      if (s.variable == SweepVariable::C1) {
        swept_given({"C1", "C2"});
        s.c2_ratio = number_or(m, "ratio", 2.0);
      } else {
        s.C1 = number(m, "C1");
        s.c2_ratio = resolve_ratio(m, s.C1);
      }
      if (s.variable == SweepVariable::r) swept_given({"r"});
      else s.r = number(m, "r");
      apply_pairs(m, s);
      s.label = "sweep";
      s.validate();
      if (cfg.out.empty()) throw Error(ErrorKind::MissingKey, "missing required key 'out'");
      break;
    }
    case RunMode::Preset: {
      restrict_keys(m, cfg.mode, {"preset", "curves", "lo", "hi", "points", "scale", "pairs",
                                  "kappa1", "kappa2", "gamma", "omega_m", "C1", "ratio", "nth", "T",
                                  "r"});
      cfg.preset = text(m, "preset");
      auto specs = figure_preset(cfg.preset);
      const SweepVariable swept = specs.front().variable;
      const bool curves_in_r = swept != SweepVariable::r;
      const std::string_view curve_key = curves_in_r ? "r" : "C1";

      std::vector<double> curve_values;
      if (has(m, "curves") && has(m, curve_key)) {
        throw Error(ErrorKind::ParseError, "keys 'curves' and '" + std::string(curve_key) + "' conflict");
      }
      if (has(m, "curves")) {
        const auto& entry = m.at("curves");
        for (const auto& item : split_list(entry.value)) {
          curve_values.push_back(parse_value(curve_key, ConfigEntry{item, entry.line}));
        }
        if (curve_values.empty()) throw Error(ErrorKind::InvalidSpec, "empty curve list");
      } else if (has(m, curve_key)) {
        curve_values.push_back(number(m, curve_key));
      }
      if (!curve_values.empty()) {
        const SweepSpec proto = specs.front();
        specs.clear();
        for (double v : curve_values) {
          SweepSpec s = proto;
          (curves_in_r ? s.r : s.C1) = v;
          char buf[64];
          std::snprintf(buf, sizeof buf, "%s=%g", std::string(curve_key).c_str(), v);
          s.label = buf;
          specs.push_back(s);
        }
      }

      for (SweepSpec& s : specs) {
        s.kappa1 = number_or(m, "kappa1", s.kappa1);
        s.kappa2 = number_or(m, "kappa2", s.kappa2);
        s.gamma_m = number_or(m, "gamma", s.gamma_m);
        s.omega_m = number_or(m, "omega_m", s.omega_m);
        s.c2_ratio = number_or(m, "ratio", s.c2_ratio);
        s.lo = number_or(m, "lo", s.lo);
        s.hi = number_or(m, "hi", s.hi);
        if (has(m, "points")) s.points = integer(m, "points");
        if (has(m, "scale")) s.scale = parse_grid_scale(text(m, "scale"));
        if (swept == SweepVariable::T) {
          if (has(m, "nth") || has(m, "T")) {
            throw Error(ErrorKind::InvalidSpec, "preset " + cfg.preset + " sweeps T; nth/T cannot be fixed");
          }
        } else if (has(m, "nth") || has(m, "T")) {
          s.n_th = resolve_nth(m, s.omega_m);
        }
        if (swept == SweepVariable::C1 && has(m, "C1")) {
          throw Error(ErrorKind::InvalidSpec, "preset " + cfg.preset + " sweeps C1; C1 cannot be fixed");
        }
        apply_pairs(m, s);
        s.validate();
      }
      cfg.preset_specs = specs;
      if (cfg.out.empty()) cfg.out = ".";
      break;
    }
    case RunMode::PhysicalConvert: {
      restrict_keys(m, cfg.mode, {"wavelength1", "wavelength2", "power1", "power2", "length1",
                                  "length2", "kappa1", "kappa2", "omega_c1", "omega_c2", "omega_m",
                                  "gamma", "mass", "nth", "T", "r"});
      PhysicalParams& p = cfg.physical;
      p = PhysicalParams::reference_setup();
      p.wavelength[0] = number_or(m, "wavelength1", p.wavelength[0]);
      p.wavelength[1] = number_or(m, "wavelength2", p.wavelength[1]);
      p.power[0] = number_or(m, "power1", p.power[0]);
      p.power[1] = number_or(m, "power2", p.power[1]);
      p.length[0] = number_or(m, "length1", p.length[0]);
      p.length[1] = number_or(m, "length2", p.length[1]);
      p.kappa[0] = number_or(m, "kappa1", p.kappa[0]);
      p.kappa[1] = number_or(m, "kappa2", p.kappa[1]);
      p.omega_c[0] = number_or(m, "omega_c1", p.omega_c[0]);
      p.omega_c[1] = number_or(m, "omega_c2", p.omega_c[1]);
      p.omega_m = number_or(m, "omega_m", p.omega_m);
      p.gamma_m = number_or(m, "gamma", p.gamma_m);
      p.mass = number_or(m, "mass", p.mass);
      p.squeeze = number_or(m, "r", p.squeeze);
      if (has(m, "T")) p.temperature = number(m, "T");
      if (has(m, "nth")) p.temperature = thermal_temperature(number(m, "nth"), p.omega_m);
      p.validate();
      break;
    }
  }
  return cfg;
}

RunConfig parse_config(std::string_view text, const ConfigMap& overrides) {
  return resolve_config(parse_config_text(text), overrides);
}

}  // namespace optocorr
