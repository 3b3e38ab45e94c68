#pragma once

// Independent oracles and random generators shared by the test binaries.
// Nothing here calls the closed-form pair formulas under test.

#include "optocorr/gaussian.hpp"
#include "optocorr/model.hpp"

#include <cmath>
#include <random>

namespace testsupport {

using optocorr::Mat2;
using optocorr::Mat4;
using optocorr::Mat6;

inline Mat2 rotation(double phi) {
  Mat2 r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

/// Two-mode squeezed thermal state: blocks (N + 1/2) I, cross M diag(1, -1).
inline optocorr::PairCM squeezed_thermal(double N, double M) {
  Mat2 cross;
  cross << M, 0, 0, -M;
  return {(N + 0.5) * Mat2::Identity(), (N + 0.5) * Mat2::Identity(), cross,
          optocorr::PairLabel::O1O2};
}

inline optocorr::PairCM tmsv(double r) {
  const double s = std::sinh(r), c = std::cosh(r);
  return squeezed_thermal(s * s, s * c);
}

inline double f_entropy(double x) {
  // Reference copy of the thermal entropy, used to check the library one.
  if (x <= 0.5) return 0;
  return (x + 0.5) * std::log(x + 0.5) - (x - 0.5) * std::log(x - 0.5);
}

/// Random two-mode symplectic matrix built from local rotations and
/// squeezers, a beam splitter and a two-mode squeezer. Ordering (x1,p1,x2,p2).
template <class Rng>
Mat4 random_symplectic(Rng& rng, double max_squeeze = 1.0) {
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  std::uniform_real_distribution<double> sq(-max_squeeze, max_squeeze);
  const auto local = [&]() {
    Mat4 s = Mat4::Zero();
    Mat2 z = Mat2::Zero();
    z(0, 0) = std::exp(sq(rng));
    z(1, 1) = 1 / z(0, 0);
    s.block<2, 2>(0, 0) = rotation(angle(rng)) * z * rotation(angle(rng));
    z(0, 0) = std::exp(sq(rng));
    z(1, 1) = 1 / z(0, 0);
    s.block<2, 2>(2, 2) = rotation(angle(rng)) * z * rotation(angle(rng));
    return s;
  };
  const double t = angle(rng);
  Mat4 bs = Mat4::Zero();
  bs.block<2, 2>(0, 0) = bs.block<2, 2>(2, 2) = std::cos(t) * Mat2::Identity();
  bs.block<2, 2>(0, 2) = std::sin(t) * Mat2::Identity();
  bs.block<2, 2>(2, 0) = -std::sin(t) * Mat2::Identity();
  const double r = sq(rng);
  Mat2 zz;
  zz << 1, 0, 0, -1;
  Mat4 tms = Mat4::Zero();
  tms.block<2, 2>(0, 0) = tms.block<2, 2>(2, 2) = std::cosh(r) * Mat2::Identity();
  tms.block<2, 2>(0, 2) = tms.block<2, 2>(2, 0) = std::sinh(r) * zz;
  return local() * bs * local() * tms * local();
}

/// Random physical two-mode covariance S diag(nu1, nu1, nu2, nu2) S^T.
template <class Rng>
Mat4 random_physical_pair(Rng& rng, double max_occupancy = 3.0, double max_squeeze = 1.0) {
  std::uniform_real_distribution<double> occ(0, max_occupancy);
  const double nu1 = 0.5 + occ(rng), nu2 = 0.5 + occ(rng);
  const Mat4 w = Eigen::Vector4d(nu1, nu1, nu2, nu2).asDiagonal();
  const Mat4 s = random_symplectic(rng, max_squeeze);
  const Mat4 v = s * w * s.transpose();
  return (v + v.transpose()) / 2;
}

/// Random pure two-mode state (both Williamson eigenvalues 1/2).
template <class Rng>
Mat4 random_pure_pair(Rng& rng, double max_squeeze = 1.0) {
  const Mat4 s = random_symplectic(rng, max_squeeze);
  const Mat4 v = 0.5 * s * s.transpose();
  return (v + v.transpose()) / 2;
}

/// Random valid ModelParams on the scales used by the figures.
template <class Rng>
optocorr::ModelParams random_model(Rng& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  const double two_pi = optocorr::constants::kTwoPi;
  const double kappa1 = two_pi * std::pow(10.0, 4.5 + 1.5 * u(rng));
  const double kappa2 = two_pi * std::pow(10.0, 4.5 + 1.5 * u(rng));
  const double gamma = two_pi * std::pow(10.0, 1.5 + 2.5 * u(rng));
  const double c1 = std::pow(10.0, -2 + 5 * u(rng));
  const double c2 = std::pow(10.0, -2 + 5 * u(rng));
  const double nth = std::pow(10.0, -4 + 5 * u(rng));
  const double r = 2.0 * u(rng);
  return optocorr::ModelParams::from_squeeze(kappa1, kappa2, gamma, c1, c2, nth, r);
}

/// Smallest symplectic eigenvalue of the partial transpose (p of the second
/// mode flipped), through the generic spectrum routine.
inline double eta_minus_oracle(const Mat4& v) {
  const Mat4 flip = Eigen::Vector4d(1, 1, 1, -1).asDiagonal();
  const Mat4 pt = flip * v * flip;
  return optocorr::symplectic_spectrum(pt).minCoeff();
}

/// Gaussian discord by direct minimisation of the conditional entropy over
/// single-mode Gaussian measurements on the second mode. The measurement
/// covariance is R(phi) diag(s, 1/s) R(phi)^T / 2, with the homodyne limits
/// treated separately.
inline double discord_oracle(const Mat4& v) {
  const Mat2 A = v.block<2, 2>(0, 0);
  const Mat2 B = v.block<2, 2>(2, 2);
  const Mat2 C = v.block<2, 2>(0, 2);
  const auto cond_det = [&](double log_s, double phi) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = 0.5 * std::exp(log_s);
    m(1, 1) = 0.25 / m(0, 0);
    const Mat2 r = rotation(phi);
    const Mat2 sigma = B + r * m * r.transpose();
    return (A - C * sigma.inverse() * C.transpose()).determinant();
  };
  const auto homodyne_det = [&](double phi) {
    const Eigen::Vector2d e(std::cos(phi), std::sin(phi));
    const Eigen::Vector2d ce = C * e;
    return (A - ce * ce.transpose() / e.dot(B * e)).determinant();
  };

  double best = A.determinant();  // trivial (uninformative) limit
  double best_ls = 0, best_phi = 0;
  bool homodyne_best = false;
  const int n_phi = 72, n_s = 81;
  for (int i = 0; i < n_phi; ++i) {
    const double phi = M_PI * i / n_phi;
    const double h = homodyne_det(phi);
    if (h < best) { best = h; best_phi = phi; homodyne_best = true; }
    for (int k = 0; k < n_s; ++k) {
      const double ls = -20 + 40.0 * k / (n_s - 1);
      const double d = cond_det(ls, phi);
      if (d < best) { best = d; best_ls = ls; best_phi = phi; homodyne_best = false; }
    }
  }
  // Local refinement by shrinking coordinate search.
  double step_ls = 0.5, step_phi = M_PI / n_phi;
  for (int it = 0; it < 200; ++it) {
    bool improved = false;
    if (homodyne_best) {
      for (double dp : {-step_phi, step_phi}) {
        const double h = homodyne_det(best_phi + dp);
        if (h < best) { best = h; best_phi += dp; improved = true; }
      }
    } else {
      for (auto [dl, dp] : {std::pair{step_ls, 0.0}, {-step_ls, 0.0}, {0.0, step_phi}, {0.0, -step_phi}}) {
        const double d = cond_det(best_ls + dl, best_phi + dp);
        if (d < best) { best = d; best_ls += dl; best_phi += dp; improved = true; }
      }
    }
    if (!improved) {
      step_ls /= 2;
      step_phi /= 2;
      if (step_phi < 1e-12) break;
    }
  }
  const Eigen::VectorXd nu = optocorr::symplectic_spectrum(v);
  return f_entropy(std::sqrt(B.determinant())) - f_entropy(nu(0)) - f_entropy(nu(1)) +
         f_entropy(std::sqrt(std::max(best, 0.25)));
}

}  // namespace testsupport
