#pragma once

// Parameter sweeps over T, r or C1 and the figure presets built on them.

#include "optocorr/errors.hpp"
#include "optocorr/gaussian.hpp"
#include "optocorr/lyapunov.hpp"
#include "optocorr/model.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace optocorr {

enum class SweepVariable { T, r, C1 };
enum class GridScale { Linear, Log };

std::string_view to_string(SweepVariable v);
std::string_view to_string(GridScale s);
SweepVariable parse_sweep_variable(std::string_view text);  // throws InvalidSpec
GridScale parse_grid_scale(std::string_view text);          // throws InvalidSpec

/// Fixed parameters of a sweep. The field named by `variable` is replaced by
/// the grid value at each point; C2 always follows c2_ratio * C1.
struct SweepSpec {
  SweepVariable variable = SweepVariable::T;
  double lo = 0;
  double hi = 0;
  int points = 400;
  GridScale scale = GridScale::Log;

  double kappa1 = 0;
  double kappa2 = 0;
  double gamma_m = 0;
  double C1 = 0;
  double n_th = 0;
  double r = 0;
  double omega_m = 0;  // only used to turn T into n_th (and for display)
  double c2_ratio = 2.0;

  std::vector<PairLabel> pairs = {kAllPairs.begin(), kAllPairs.end()};
  std::string label;  // curve name, e.g. "r=0.5"

  void validate() const;  // throws InvalidSpec

  /// ModelParams at one value of the swept variable.
  ModelParams at(double value) const;
};

/// Grid values in sweep order; endpoints are exactly lo and hi.
std::vector<double> sweep_grid(const SweepSpec& spec);

struct PairResult {
  bool selected = false;
  double eta_minus = 0;
  bool entangled = false;
  double discord = 0;
  PairCorrelations details;
};

struct CorrelationReport {
  double value = 0;  // swept variable
  ModelParams params;
  std::array<PairResult, 3> pairs;  // indexed by PairLabel
  bool stable = false;
  double margin = 0;    // max real part of the drift spectrum
  double residual = 0;  // relative Lyapunov residual
  Cov6 covariance;
  std::optional<ErrorKind> failure;  // set when the point was flagged
  std::string failure_message;

  const PairResult& pair(PairLabel p) const { return pairs[static_cast<int>(p)]; }
};

/// One grid point. Throws on any failure (UnstableDrift, NonPhysicalInput...).
CorrelationReport evaluate_point(const SweepSpec& spec, double value);

/// Every grid point in order. Failing points are flagged and the sweep goes on.
std::vector<CorrelationReport> run_sweep(const SweepSpec& spec);

enum class ThresholdQuantity { EtaCrossing, EtaMinimum, DiscordMaximum };

/// Locates an eta = 1/2 crossing (bisection) or an eta minimum / discord
/// maximum (golden section) to 1e-4 relative in the swept variable. The grid
/// of `spec` is used to bracket the target; throws NotBracketed otherwise.
double find_threshold(const SweepSpec& spec, PairLabel pair, ThresholdQuantity quantity);

inline constexpr std::array<std::string_view, 6> kPresetNames = {
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};

/// One spec per curve of the named figure. Throws UnknownPreset.
std::vector<SweepSpec> figure_preset(std::string_view name);

namespace presets {
inline constexpr double kKappa = constants::kTwoPi * 215e3;
inline constexpr double kOmegaM = constants::kTwoPi * 947e3;
inline constexpr double kGammaTemperatureFigures = constants::kTwoPi * 1500;
inline constexpr double kGammaSqueezeFigures = constants::kTwoPi * 140;
inline constexpr std::array<double, 5> kSqueezeCurves = {0.0, 0.1, 0.3, 0.5, 1.0};
inline constexpr std::array<double, 3> kCooperativityCurves = {25.0, 50.0, 100.0};
}  // namespace presets

}  // namespace optocorr
