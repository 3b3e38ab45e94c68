#pragma once

// Steady-state covariance from A V + V A^T = -D, plus an independent
// quadrature of V = int_0^inf exp(As) D exp(As)^T ds used as an oracle.

#include "optocorr/gaussian.hpp"
#include "optocorr/model.hpp"

namespace optocorr {

struct LyapunovProblem {
  Mat6 drift;
  Mat6 diffusion;

  static LyapunovProblem from_model(const ModelParams& mp);
};

struct LyapunovSolution {
  Cov6 covariance;
  double residual = 0;    // ||A V + V A^T + D||_F / ||D||_F
  double asymmetry = 0;   // ||V - V^T||_F / ||V||_F before symmetrisation
  bool asymmetry_warning = false;  // asymmetry above 1e-10
  StabilityVerdict stability;
};

/// Dense Kronecker solve (I (x) A + A (x) I) vec V = -vec D with partial
/// pivoting, followed by symmetrisation. Throws UnstableDrift when the drift
/// is not Hurwitz and SingularSystem when the factorisation degenerates.
LyapunovSolution solve_lyapunov(const LyapunovProblem& p);

/// Same equation solved as two independent 3x3 problems on the (X1, X2, q)
/// and (Y1, Y2, p) groups. Only valid when A and D block-decouple under that
/// grouping; used to cross-check the 6x6 solve.
Cov6 solve_lyapunov_split(const LyapunovProblem& p);

double lyapunov_residual(const Mat6& drift, const Mat6& v, const Mat6& diffusion);

struct QuadratureOptions {
  double horizon = 30;            // in units of the slowest decay time
  double abs_tolerance = 1e-8;    // per entry of V
  int max_depth = 50;
};

/// Adaptive Simpson integration of exp(As) D exp(As)^T. Throws UnstableDrift,
/// InvalidParameter (horizon below 20) or ToleranceNotMet.
Cov6 integrate_covariance(const LyapunovProblem& p, const QuadratureOptions& opt = {});

PairCM reduce_pair(const Cov6& cm, PairLabel pair);

/// Permutation grouping (X1, X2, q, Y1, Y2, p).
const std::array<int, 6>& xy_grouping();

/// Largest |entry| coupling the (X1, X2, q) and (Y1, Y2, p) groups.
double xy_cross_coupling(const Mat6& m);

namespace detail {
/// Kronecker solve without the stability precondition.
Mat6 solve_kronecker(const Mat6& drift, const Mat6& diffusion);
}  // namespace detail

}  // namespace optocorr
