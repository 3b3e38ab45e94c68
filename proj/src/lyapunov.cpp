#include "optocorr/lyapunov.hpp"

#include "optocorr/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>
#include <vector>

namespace optocorr {

namespace {

template <int N>
using Mat = Eigen::Matrix<double, N, N>;

template <int N>
Mat<N> kronecker_solve(const Mat<N>& a, const Mat<N>& d) {
  constexpr int n2 = N * N;
  Eigen::Matrix<double, n2, n2> op = Eigen::Matrix<double, n2, n2>::Zero();
  // Column-major vec: vec(AV) = (I (x) A) vec V, vec(V A^T) = (A (x) I) vec V.
  for (int blk = 0; blk < N; ++blk) {
    op.template block<N, N>(blk * N, blk * N) += a;
    for (int col = 0; col < N; ++col) {
      op.template block<N, N>(blk * N, col * N) +=
          a(blk, col) * Mat<N>::Identity();
    }
  }
  Eigen::PartialPivLU<Eigen::Matrix<double, n2, n2>> lu(op);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw Error(ErrorKind::SingularSystem,
                "Lyapunov operator is singular (rcond " + std::to_string(rcond) + ")");
  }
  const Eigen::Matrix<double, n2, 1> rhs = -Eigen::Map<const Eigen::Matrix<double, n2, 1>>(d.data());
  const Eigen::Matrix<double, n2, 1> x = lu.solve(rhs);
  if (!x.allFinite()) throw Error(ErrorKind::SingularSystem, "Lyapunov solve produced non-finite values");
  return Eigen::Map<const Mat<N>>(x.data());
}

void require_stable(const StabilityVerdict& v) {
  if (!v.stable) {
    throw Error(ErrorKind::UnstableDrift,
                "drift matrix is not Hurwitz (max Re eigenvalue " +
                    std::to_string(v.max_real_part) + ")");
  }
}

}  // namespace

LyapunovProblem LyapunovProblem::from_model(const ModelParams& mp) {
  return {build_drift(mp), build_diffusion(mp)};
}

double lyapunov_residual(const Mat6& drift, const Mat6& v, const Mat6& diffusion) {
  const double r = (drift * v + v * drift.transpose() + diffusion).norm();
  const double scale = diffusion.norm();
  return scale > 0 ? r / scale : r;
}

namespace detail {
Mat6 solve_kronecker(const Mat6& drift, const Mat6& diffusion) {
  return kronecker_solve<6>(drift, diffusion);
}
}  // namespace detail

LyapunovSolution solve_lyapunov(const LyapunovProblem& p) {
  LyapunovSolution out;
  out.stability = is_stable(p.drift);
  require_stable(out.stability);

  const Mat6 raw = detail::solve_kronecker(p.drift, p.diffusion);
  const double norm = raw.norm();
  out.asymmetry = norm > 0 ? (raw - raw.transpose()).norm() / norm : 0.0;
  out.asymmetry_warning = out.asymmetry > 1e-10;
  const Mat6 v = (raw + raw.transpose()) / 2;
  out.covariance = Cov6(v);
  out.residual = lyapunov_residual(p.drift, v, p.diffusion);
  return out;
}

const std::array<int, 6>& xy_grouping() {
  static const std::array<int, 6> order = {0, 2, 4, 1, 3, 5};
  return order;
}

double xy_cross_coupling(const Mat6& m) {
  const auto& g = xy_grouping();
  double worst = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j)
      worst = std::max({worst, std::abs(m(g[i], g[j])), std::abs(m(g[j], g[i]))});
  return worst;
}

Cov6 solve_lyapunov_split(const LyapunovProblem& p) {
  require_stable(is_stable(p.drift));
  const auto& g = xy_grouping();
  Mat6 v = Mat6::Zero();
  for (int half = 0; half < 2; ++half) {
    Mat<3> a, d;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a(i, j) = p.drift(g[3 * half + i], g[3 * half + j]);
        d(i, j) = p.diffusion(g[3 * half + i], g[3 * half + j]);
      }
    const Mat<3> x = kronecker_solve<3>(a, d);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) v(g[3 * half + i], g[3 * half + j]) = x(i, j);
  }
  return Cov6((v + v.transpose()) / 2);
}

namespace {

class CovarianceIntegrand {
 public:
  CovarianceIntegrand(const Mat6& a, const Mat6& d) : a_(a), d_(d) {}

  Mat6 operator()(double s) const {
    const Mat6 f = (a_ * s).exp();
    return f * d_ * f.transpose();
  }

 private:
  Mat6 a_;
  Mat6 d_;
};

struct SimpsonPanel {
  double lo, hi;
  Mat6 f_lo, f_mid, f_hi;
  Mat6 whole;
};

Mat6 simpson(double lo, double hi, const Mat6& f_lo, const Mat6& f_mid, const Mat6& f_hi) {
  return (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
}

Mat6 adaptive_simpson(const CovarianceIntegrand& f, const SimpsonPanel& panel,
                      double tol, int depth, int max_depth) {
  const double mid = 0.5 * (panel.lo + panel.hi);
  const Mat6 f_left = f(0.5 * (panel.lo + mid));
  const Mat6 f_right = f(0.5 * (mid + panel.hi));
  const Mat6 left = simpson(panel.lo, mid, panel.f_lo, f_left, panel.f_mid);
  const Mat6 right = simpson(mid, panel.hi, panel.f_mid, f_right, panel.f_hi);
  const Mat6 delta = left + right - panel.whole;
  if (delta.cwiseAbs().maxCoeff() <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= max_depth) {
    throw Error(ErrorKind::ToleranceNotMet,
                "adaptive quadrature did not converge near s = " + std::to_string(mid));
  }
  return adaptive_simpson(f, {panel.lo, mid, panel.f_lo, f_left, panel.f_mid, left},
                          0.5 * tol, depth + 1, max_depth) +
         adaptive_simpson(f, {mid, panel.hi, panel.f_mid, f_right, panel.f_hi, right},
                          0.5 * tol, depth + 1, max_depth);
}

}  // namespace

Cov6 integrate_covariance(const LyapunovProblem& p, const QuadratureOptions& opt) {
  const auto verdict = is_stable(p.drift);
  require_stable(verdict);
  if (!(opt.horizon >= 20)) {
    throw Error(ErrorKind::InvalidParameter,
                "quadrature horizon must be at least 20 decay times");
  }

  // exp(As) D exp(As)^T decays like exp(2 max Re(lambda) s).
  const double slowest = -2.0 * verdict.max_real_part;
  const double end = opt.horizon / slowest;
  const double fastest = std::max(p.drift.cwiseAbs().rowwise().sum().maxCoeff(), slowest);

  // Geometric panels resolve the fast transients near s = 0 and the slow tail.
  std::vector<double> edges = {0.0};
  double width = 0.05 / fastest;
  while (edges.back() < end) {
    edges.push_back(std::min(end, edges.back() + width));
    width *= 2;
  }

  const CovarianceIntegrand f(p.drift, p.diffusion);
  const double panel_tol = opt.abs_tolerance / static_cast<double>(edges.size() - 1);
  Mat6 total = Mat6::Zero();
  Mat6 f_lo = f(0.0);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k];
    const double hi = edges[k + 1];
    const Mat6 f_mid = f(0.5 * (lo + hi));
    const Mat6 f_hi = f(hi);
    total += adaptive_simpson(f, {lo, hi, f_lo, f_mid, f_hi, simpson(lo, hi, f_lo, f_mid, f_hi)},
                              panel_tol, 0, opt.max_depth);
    f_lo = f_hi;
  }
  return Cov6((total + total.transpose()) / 2);
}

PairCM reduce_pair(const Cov6& cm, PairLabel pair) {
  const Mode a = first_mode(pair);
  const Mode b = second_mode(pair);
  return {cm.local_block(a), cm.local_block(b), cm.cross_block(a, b), pair};
}

}  // namespace optocorr
