#include "optocorr/model.hpp"

#include "optocorr/errors.hpp"

#include <cmath>
#include <string>

namespace optocorr {

using namespace constants;

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::InvalidParameter, message);
}

void check_cavity_index(int j) {
  require(j == 1 || j == 2, "cavity index must be 1 or 2, got " + std::to_string(j));
}

}  // namespace

void PhysicalParams::validate() const {
  for (int k = 0; k < 2; ++k) {
    const std::string suffix = std::to_string(k + 1);
    require(wavelength[k] > 0, "wavelength" + suffix + " must be positive");
    require(power[k] >= 0, "power" + suffix + " must be non-negative");
    require(length[k] > 0, "length" + suffix + " must be positive");
    require(kappa[k] > 0, "kappa" + suffix + " must be positive");
    require(omega_c[k] > 0, "omega_c" + suffix + " must be positive");
  }
  require(omega_m > 0, "omega_m must be positive");
  require(gamma_m > 0, "gamma must be positive");
  require(mass > 0, "mass must be positive");
  require(temperature >= 0, "T must be non-negative");
  require(squeeze >= 0, "r must be non-negative");
}

double PhysicalParams::omega_laser(int j) const {
  check_cavity_index(j);
  return kTwoPi * kSpeedOfLight / wavelength[j - 1];
}

PhysicalParams PhysicalParams::reference_setup() {
  PhysicalParams p;
  p.wavelength[0] = p.wavelength[1] = 1064e-9;
  p.power[0] = 10e-3;
  p.power[1] = 20e-3;
  p.length[0] = p.length[1] = 25e-3;
  p.kappa[0] = p.kappa[1] = kTwoPi * 215e3;
  p.omega_c[0] = p.omega_c[1] = 3.5e15;
  p.omega_m = kTwoPi * 947e3;
  p.gamma_m = kTwoPi * 1500;
  p.mass = 145e-12;
  p.temperature = 0;
  p.squeeze = 0;
  return p;
}

ModelParams ModelParams::from_squeeze(double kappa1, double kappa2, double gamma_m,
                                      double C1, double C2, double n_th, double r) {
  require(r >= 0, "r must be non-negative");
  const auto sq = squeeze_moments(r);
  ModelParams mp{kappa1, kappa2, gamma_m, C1, C2, n_th, sq.N, sq.M};
  mp.validate();
  return mp;
}

double ModelParams::coupling(int j) const {
  check_cavity_index(j);
  const double kappa = j == 1 ? kappa1 : kappa2;
  const double C = j == 1 ? C1 : C2;
  return 0.5 * std::sqrt(gamma_m * kappa * C);
}

void ModelParams::validate() const {
  require(kappa1 > 0 && kappa2 > 0, "cavity decay rates must be positive");
  require(gamma_m > 0, "mechanical damping must be positive");
  require(C1 >= 0 && C2 >= 0, "cooperativities must be non-negative");
  require(n_th >= 0, "n_th must be non-negative");
  require(N >= 0 && M >= 0, "squeezing moments must be non-negative");
  const double gap = M * M - N * (N + 1);
  require(std::abs(gap) <= 1e-12 * std::max(1.0, N * (N + 1)),
          "squeezing moments violate M^2 = N(N+1)");
  require(std::isfinite(kappa1 + kappa2 + gamma_m + C1 + C2 + n_th + N + M),
          "parameters must be finite");
}

double thermal_occupancy(double temperature, double omega_m) {
  require(temperature >= 0, "temperature must be non-negative");
  require(omega_m > 0, "omega_m must be positive");
  if (temperature == 0) return 0;
  return 1.0 / std::expm1(kHbar * omega_m / (kBoltzmann * temperature));
}

double thermal_temperature(double n_th, double omega_m) {
  require(n_th >= 0, "n_th must be non-negative");
  require(omega_m > 0, "omega_m must be positive");
  if (n_th == 0) return 0;
  return kHbar * omega_m / (kBoltzmann * std::log1p(1.0 / n_th));
}

SqueezeMoments squeeze_moments(double r) {
  require(r >= 0, "r must be non-negative");
  const double s = std::sinh(r);
  return {s * s, s * std::cosh(r)};
}

CooperativityReport cooperativity(const PhysicalParams& p, int j) {
  check_cavity_index(j);
  p.validate();
  const int k = j - 1;
  const double omega_l = p.omega_laser(j);
  const double detuning_sq = 0.25 * p.kappa[k] * p.kappa[k] + p.omega_m * p.omega_m;

  CooperativityReport out;
  out.cooperativity = 8 * p.omega_c[k] * p.omega_c[k] * p.power[k] /
                      (p.gamma_m * p.mass * p.omega_m * omega_l * p.length[k] *
                       p.length[k] * detuning_sq);
  out.single_photon_coupling =
      p.omega_c[k] / p.length[k] * std::sqrt(kHbar / (p.mass * p.omega_m));
  out.drive = std::sqrt(2 * p.kappa[k] * p.power[k] / (kHbar * omega_l));
  out.photon_number = out.drive * out.drive / detuning_sq;
  return out;
}

SteadyState steady_state(const PhysicalParams& p, int j) {
  check_cavity_index(j);
  p.validate();
  using namespace std::complex_literals;

  std::complex<double> amplitude[2];
  double phase[2];
  double g[2];
  for (int k = 0; k < 2; ++k) {
    const double effective = -p.omega_m;
    phase[k] = -std::atan(2 * effective / p.kappa[k]);
    const double drive = std::sqrt(2 * p.kappa[k] * p.power[k] /
                                   (kHbar * p.omega_laser(k + 1)));
    amplitude[k] = -2.0i * std::exp(1.0i * phase[k]) * drive /
                   (p.kappa[k] - 2.0i * effective);
    g[k] = p.omega_c[k] / p.length[k] * std::sqrt(kHbar / (p.mass * p.omega_m));
  }

  // Radiation pressure of the two cavities enters with opposite signs.
  const double pressure = g[0] * std::norm(amplitude[0]) - g[1] * std::norm(amplitude[1]);
  const std::complex<double> b_s = 2.0i / (p.gamma_m + 2.0i * p.omega_m) * pressure;

  const int k = j - 1;
  const double sign = j == 1 ? 1.0 : -1.0;
  SteadyState out;
  out.a_s = amplitude[k];
  out.b_s = b_s;
  out.photon_number = std::norm(amplitude[k]);
  out.input_phase = phase[k];
  out.effective_detuning = -p.omega_m;
  out.bare_detuning = out.effective_detuning - sign * g[k] * 2 * b_s.real();
  return out;
}

ModelParams to_model_params(const PhysicalParams& p) {
  p.validate();
  return ModelParams::from_squeeze(p.kappa[0], p.kappa[1], p.gamma_m,
                                   cooperativity(p, 1).cooperativity,
                                   cooperativity(p, 2).cooperativity,
                                   thermal_occupancy(p.temperature, p.omega_m),
                                   p.squeeze);
}

Mat6 build_drift(const ModelParams& mp) {
  mp.validate();
  const double g1 = std::sqrt(mp.gamma_m * mp.kappa1 * mp.C1);
  const double g2 = std::sqrt(mp.gamma_m * mp.kappa2 * mp.C2);
  Mat6 a;
  // clang-format off
  a << -mp.kappa1, 0,          0,          0,          g1,          0,
       0,          -mp.kappa1, 0,          0,          0,           g1,
       0,          0,          -mp.kappa2, 0,          -g2,         0,
       0,          0,          0,          -mp.kappa2, 0,           -g2,
       -g1,        0,          g2,         0,          -mp.gamma_m, 0,
       0,          -g1,        0,          g2,         0,           -mp.gamma_m;
  // clang-format on
  return 0.5 * a;
}

Mat6 build_diffusion(const ModelParams& mp) {
  mp.validate();
  Mat6 d = Mat6::Zero();
  const double optical = mp.N + 0.5;
  const double cross = std::sqrt(mp.kappa1 * mp.kappa2) * mp.M;
  d(0, 0) = d(1, 1) = mp.kappa1 * optical;
  d(2, 2) = d(3, 3) = mp.kappa2 * optical;
  d(4, 4) = d(5, 5) = mp.gamma_m * (mp.n_th + 0.5);
  d(0, 2) = d(2, 0) = cross;
  d(1, 3) = d(3, 1) = -cross;
  return d;
}

StabilityVerdict is_stable(const Mat6& drift) {
  StabilityVerdict v;
  if (!drift.allFinite()) return v;

  double scale = 2 * drift.diagonal().cwiseAbs().maxCoeff();
  if (scale == 0) scale = drift.cwiseAbs().maxCoeff();

  Eigen::EigenSolver<Mat6> es(drift, false);
  v.max_real_part = es.eigenvalues().real().maxCoeff();
  v.stable = v.max_real_part < -1e-9 * scale;

  const Mat6 symmetric_part = -(drift + drift.transpose());
  Eigen::LLT<Mat6> llt(symmetric_part);
  v.structurally_stable = llt.info() == Eigen::Success && scale > 0;
  return v;
}

}  // namespace optocorr
