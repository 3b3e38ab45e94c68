#pragma once

// Linearised red-sideband (RWA) model of two cavities sharing one mirror,
// fed with two-mode squeezed vacuum. Converts lab parameters into the
// reduced parameter set and builds the drift and diffusion matrices of
// du/dt = A u + n for u = (X1, Y1, X2, Y2, q, p).

#include "optocorr/gaussian.hpp"

#include <complex>

namespace optocorr {

namespace constants {
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K
inline constexpr double kSpeedOfLight = 299792458.0;  // m / s
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace constants

/// Lab-frame parameters. Rates and frequencies are angular (rad/s).
struct PhysicalParams {
  double wavelength[2] = {1064e-9, 1064e-9};  // m
  double power[2] = {10e-3, 20e-3};           // W
  double length[2] = {25e-3, 25e-3};          // m
  double kappa[2] = {0, 0};                   // rad/s
  double omega_c[2] = {0, 0};                 // rad/s
  double omega_m = 0;                         // rad/s
  double gamma_m = 0;                         // rad/s
  double mass = 0;                            // kg
  double temperature = 0;                     // K
  double squeeze = 0;

  void validate() const;

  /// Laser angular frequency 2 pi c / lambda_j.
  double omega_laser(int j) const;

  /// The experimental parameter list used for the temperature figures.
  /// omega_c is taken as the quoted 3.5e15 read as rad/s.
  static PhysicalParams reference_setup();
};

/// Reduced parameters that fully determine the drift and diffusion matrices.
struct ModelParams {
  double kappa1 = 0;
  double kappa2 = 0;
  double gamma_m = 0;
  double C1 = 0;
  double C2 = 0;
  double n_th = 0;
  double N = 0;  // sinh^2 r
  double M = 0;  // sinh r cosh r

  /// Builds a parameter set with (N, M) from the squeeze parameter r.
  static ModelParams from_squeeze(double kappa1, double kappa2, double gamma_m,
                                  double C1, double C2, double n_th, double r);

  /// Effective coupling G_j = sqrt(gamma kappa_j C_j) / 2 (j = 1, 2).
  double coupling(int j) const;

  void validate() const;
};

double thermal_occupancy(double temperature, double omega_m);

/// Inverse of thermal_occupancy: the bath temperature giving n_th.
double thermal_temperature(double n_th, double omega_m);

struct SqueezeMoments {
  double N = 0;
  double M = 0;
};

SqueezeMoments squeeze_moments(double r);

struct CooperativityReport {
  double cooperativity = 0;
  double single_photon_coupling = 0;  // g_j, rad/s
  double drive = 0;                   // epsilon_j, 1/s
  double photon_number = 0;           // n_cav^j
};

/// C_j from the closed-form expression in the lab parameters. j is 1 or 2.
CooperativityReport cooperativity(const PhysicalParams& p, int j);

struct SteadyState {
  std::complex<double> a_s;  // intracavity amplitude of cavity j
  std::complex<double> b_s;  // mirror amplitude (depends on both cavities)
  double photon_number = 0;
  double input_phase = 0;    // phi_j, rad
  double effective_detuning = 0;  // Delta'_j, fixed to -omega_m
  double bare_detuning = 0;       // Delta_j realising Delta'_j = -omega_m
};

/// Mean fields at the red sideband, Delta'_j = -omega_m. j is 1 or 2.
SteadyState steady_state(const PhysicalParams& p, int j);

/// ModelParams implied by the lab parameters (C_j, n_th, N, M).
ModelParams to_model_params(const PhysicalParams& p);

Mat6 build_drift(const ModelParams& mp);
Mat6 build_diffusion(const ModelParams& mp);

struct StabilityVerdict {
  bool stable = false;
  double max_real_part = 0;  // margin; stable iff below -1e-9 * rate scale
  bool structurally_stable = false;  // A + A^T negative definite
};

StabilityVerdict is_stable(const Mat6& drift);

}  // namespace optocorr
