#pragma once

#include "optocorr/config.hpp"
#include "optocorr/errors.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace optocorr {

/// Stated cooperativity of the reference setup, compared against the value
/// computed from the lab parameters in physical-convert mode.
inline constexpr double kStatedC1 = 35.0;

/// Executes a resolved configuration. Reports go to `out`, diagnostics to
/// `err`. Returns the files written. Throws Error on failure; no file is
/// written unless every curve has been computed.
std::vector<std::filesystem::path> run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// `error kind=<Kind> code=<n> message="<text>"`
std::string error_line(const Error& e);

/// File name of one preset curve, e.g. fig2_r0.5.csv.
std::string preset_file_name(const std::string& preset, const SweepSpec& spec);

}  // namespace optocorr
