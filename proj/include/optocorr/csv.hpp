#pragma once

// Sweep CSV output: `#` provenance comments, a fixed header, one row per grid
// point, every number written with 17 significant digits so that reading the
// file back reproduces the doubles exactly.

#include "optocorr/sweep.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace optocorr {

inline constexpr std::string_view kCsvHeader =
    "swept_var,value,eta_mo1,eta_mo2,eta_o1o2,disc_mo1,disc_mo2,disc_o1o2,stable,residual";

/// "%.17g"; non-finite values become "nan" / "inf" / "-inf".
std::string format_double(double v);

/// Provenance lines (without the leading '#') describing a sweep spec.
std::vector<std::string> describe_spec(const SweepSpec& spec);

std::string sweep_csv(const SweepSpec& spec, const std::vector<CorrelationReport>& reports,
                      const std::vector<std::string>& extra_comments = {});

struct CsvRow {
  std::string swept_var;
  double value = 0;
  std::array<double, 3> eta{};   // mo1, mo2, o1o2
  std::array<double, 3> disc{};  // mo1, mo2, o1o2
  bool stable = false;
  double residual = 0;
};

struct CsvTable {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<CsvRow> rows;
};

/// Parses text produced by sweep_csv. Throws ParseError.
CsvTable read_csv(std::string_view text);

/// Writes to a temporary sibling file and renames it over `path`, so the
/// final path never holds a partial file. Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace optocorr
