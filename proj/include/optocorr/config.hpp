#pragma once

// Flat `key = value` configuration files, command-line overrides and the
// resolved run configuration.
//
//   # comment
//   mode   = point
//   kappa1 = "2pi*215e3"   # rates in rad/s, 2pi* shorthand allowed
//   C1     = 35

#include "optocorr/model.hpp"
#include "optocorr/sweep.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace optocorr {

enum class RunMode { Point, Sweep, Preset, PhysicalConvert };

std::string_view to_string(RunMode m);

enum class KeyKind { Rate, Number, Integer, Text };

struct KeyInfo {
  std::string_view name;
  KeyKind kind;
  std::string_view help;
};

/// Every accepted key, in documentation order.
const std::vector<KeyInfo>& config_keys();

struct ConfigEntry {
  std::string value;
  int line = 0;  // 0 for command-line overrides
};

using ConfigMap = std::map<std::string, ConfigEntry, std::less<>>;

/// Splits a document into entries. Throws ParseError (malformed line,
/// duplicate key) and UnknownKey, both with line context.
ConfigMap parse_config_text(std::string_view text);

/// Value of a numeric key. Rate keys accept `2pi*X`; any other unit text
/// raises UnitError. Malformed numbers raise ParseError.
double parse_value(std::string_view key, const ConfigEntry& entry);

struct RunConfig {
  RunMode mode = RunMode::Point;
  SweepSpec spec;                   // point and sweep modes
  double point_value = 0;           // value of spec.variable in point mode
  std::string preset;               // preset mode
  std::vector<SweepSpec> preset_specs;
  PhysicalParams physical;          // physical-convert mode
  std::string out;
  int verbosity = 0;
};

/// Merges file entries with overrides (overrides win; an override of T
/// drops a file nth and vice versa) and resolves the run. Throws ParseError,
/// UnitError, UnknownKey, MissingKey, InvalidSpec, UnknownPreset.
RunConfig resolve_config(const ConfigMap& file, const ConfigMap& overrides = {});

RunConfig parse_config(std::string_view text, const ConfigMap& overrides = {});

}  // namespace optocorr
