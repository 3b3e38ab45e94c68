#include "optocorr/gaussian.hpp"

#include "optocorr/errors.hpp"

#include <boost/multiprecision/float128.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace optocorr {

namespace {

// Pair quantities are evaluated in quad precision. The formulas have square
// roots of expressions that vanish exactly on pure states (and on the
// vacuum), so double-precision cancellation noise of order 1e-16 * scale
// would become ~1e-8 * sqrt(scale) in the symplectic eigenvalues.
using Quad = boost::multiprecision::float128;

constexpr double kRootTolerance = 1e-12;
constexpr double kPhysicalTolerance = 1e-9;
constexpr double kProductThreshold = 1e-14;

template <class R>
struct Block {
  R a, b, c, d;  // [[a, b], [c, d]]

  static Block from(const Mat2& m) {
    return {R(m(0, 0)), R(m(0, 1)), R(m(1, 0)), R(m(1, 1))};
  }
  R det() const { return a * d - b * c; }
  R trace() const { return a + d; }
  Block transposed() const { return {a, c, b, d}; }
  Block operator*(const Block& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
            c * o.b + d * o.d};
  }
};

template <class R>
Block<R> symplectic_form() {
  return {R(0), R(1), R(-1), R(0)};
}

template <class R>
struct Invariants {
  R alpha, beta, theta, lam, deltaPT, deltaTilde, discPT, discTilde;
};

template <class R>
Invariants<R> compute_invariants(const PairCM& pcm) {
  const auto A = Block<R>::from(pcm.blockA);
  const auto B = Block<R>::from(pcm.blockB);
  const auto C = Block<R>::from(pcm.cross);
  const auto J = symplectic_form<R>();

  Invariants<R> inv;
  inv.alpha = A.det();
  inv.beta = B.det();
  inv.theta = C.det();
  // det V = alpha beta + theta^2 - tau, with tau = tr(A J C J B J C^T J).
  const R tau = (A * J * C * J * B * J * C.transposed() * J).trace();
  inv.lam = inv.alpha * inv.beta + inv.theta * inv.theta - tau;
  inv.deltaPT = inv.alpha + inv.beta - 2 * inv.theta;
  inv.deltaTilde = inv.alpha + inv.beta + 2 * inv.theta;
  // Delta^2 - 4 lam expanded so that no O(Delta^2) terms cancel. The partial
  // transpose flips the sign of theta and leaves tau unchanged.
  const R diff = inv.alpha - inv.beta;
  const R sum = inv.alpha + inv.beta;
  inv.discTilde = diff * diff + 4 * inv.theta * sum + 4 * tau;
  inv.discPT = diff * diff - 4 * inv.theta * sum + 4 * tau;
  return inv;
}

template <class R>
R clamp_root_argument(R value, R scale, const char* what, unsigned flag,
                      unsigned& clamps) {
  using std::max;
  const R tol = R(kRootTolerance) * max(R(1), scale);
  if (value >= 0) return value;
  if (value < -tol) {
    throw Error(ErrorKind::NonPhysicalInput,
                std::string(what) + " is negative beyond tolerance (" +
                    std::to_string(static_cast<double>(value)) + ")");
  }
  clamps |= flag;
  return R(0);
}

// Smallest and largest root of x^2 - delta x + lam = 0 expressed for the
// squared symplectic eigenvalues: the large root directly, the small one as
// lam / large so it keeps full relative precision.
template <class R>
SymplecticPair symplectic_roots(R delta, R disc, R lam, const char* what) {
  using std::sqrt;
  const R large = (delta + sqrt(disc)) / 2;
  if (!(large > 0) || !(lam > 0)) {
    throw Error(ErrorKind::NonPhysicalInput,
                std::string(what) + ": covariance determinant is not positive");
  }
  return {static_cast<double>(sqrt(large)), static_cast<double>(sqrt(lam / large))};
}

template <class R>
R entropy(R x, unsigned& clamps) {
  using std::log;
  const R half = R(0.5);
  if (x < half - R(kPhysicalTolerance)) {
    throw Error(ErrorKind::DomainError,
                "entropy argument below 1/2: " + std::to_string(static_cast<double>(x)));
  }
  if (x <= half) {
    if (x < half) clamps |= kClampEntropyArgument;
    return R(0);
  }
  const R up = x + half;
  const R down = x - half;
  return up * log(up) - down * log(down);
}

template <class R>
R epsilon_discriminant(const Invariants<R>& v) {
  const R t2 = v.theta * v.theta;
  const R gap = v.lam - v.alpha * v.beta;
  return gap * gap - (R(0.25) + v.beta) * t2 * (v.alpha + 4 * v.lam);
}

template <class R>
R epsilon_nonpositive(const Invariants<R>& v, unsigned& clamps) {
  using std::abs;
  using std::sqrt;
  const R t2 = v.theta * v.theta;
  const R purity_gap = R(0.25) - v.beta;
  const R mixed = purity_gap * (v.alpha - 4 * v.lam);
  const R root = clamp_root_argument(t2 + mixed, t2, "epsilon radicand",
                                     kClampEpsilonRoot, clamps);
  return (2 * t2 + mixed + 2 * abs(v.theta) * sqrt(root)) /
         (4 * purity_gap * purity_gap);
}

template <class R>
R epsilon_positive(const Invariants<R>& v, unsigned& clamps) {
  using std::sqrt;
  const R t2 = v.theta * v.theta;
  const R ab = v.alpha * v.beta;
  const R gap = v.lam - ab;
  const R radicand = t2 * t2 + gap * gap - 2 * t2 * (ab + v.lam);
  const R x = ab - t2 + v.lam;
  const R root = sqrt(clamp_root_argument(radicand, x * x, "epsilon radicand",
                                          kClampEpsilonRoot, clamps));
  // (x - root) / (2 beta) rewritten with x^2 - radicand = 4 alpha beta lam.
  if (x + root > 0) return 2 * v.alpha * v.lam / (x + root);
  return (x - root) / (2 * v.beta);
}

PairInvariants to_double(const Invariants<Quad>& q) {
  PairInvariants inv;
  inv.alpha = static_cast<double>(q.alpha);
  inv.beta = static_cast<double>(q.beta);
  inv.theta = static_cast<double>(q.theta);
  inv.lam = static_cast<double>(q.lam);
  inv.deltaPT = static_cast<double>(q.deltaPT);
  inv.deltaTilde = static_cast<double>(q.deltaTilde);
  inv.discPT = static_cast<double>(q.discPT);
  inv.discTilde = static_cast<double>(q.discTilde);
  return inv;
}

Invariants<double> from_double(const PairInvariants& inv) {
  return {inv.alpha,   inv.beta,       inv.theta,  inv.lam,
          inv.deltaPT, inv.deltaTilde, inv.discPT, inv.discTilde};
}

}  // namespace

std::string_view to_string(PairLabel p) {
  switch (p) {
    case PairLabel::MO1: return "mo1";
    case PairLabel::MO2: return "mo2";
    case PairLabel::O1O2: return "o1o2";
  }
  return "?";
}

Mat4 PairCM::assembled() const {
  Mat4 m;
  m << blockA, cross, cross.transpose(), blockB;
  return m;
}

PairCM PairCM::from_matrix(const Mat4& m, PairLabel label) {
  return {m.block<2, 2>(0, 0), m.block<2, 2>(2, 2), m.block<2, 2>(0, 2), label};
}

PairInvariants pair_invariants(const PairCM& pcm) {
  return to_double(compute_invariants<Quad>(pcm));
}

double simon_eta_minus(const PairInvariants& inv) {
  unsigned clamps = 0;
  const double disc = clamp_root_argument(inv.discPT, inv.deltaPT * inv.deltaPT,
                                          "partial-transpose discriminant",
                                          kClampPTDiscriminant, clamps);
  return symplectic_roots(inv.deltaPT, disc, inv.lam, "eta").minus;
}

SymplecticPair nu_symplectic(const PairInvariants& inv) {
  unsigned clamps = 0;
  const double disc = clamp_root_argument(inv.discTilde, inv.deltaTilde * inv.deltaTilde,
                                          "symplectic discriminant",
                                          kClampDiscriminant, clamps);
  return symplectic_roots(inv.deltaTilde, disc, inv.lam, "nu");
}

double entropy_f(double x) {
  unsigned clamps = 0;
  return entropy(x, clamps);
}

PairCorrelations analyze_pair(const PairCM& pcm) {
  using std::sqrt;
  PairCorrelations out;
  const auto q = compute_invariants<Quad>(pcm);
  out.invariants = to_double(q);

  // The symplectic-eigenvalue test alone accepts some indefinite matrices.
  if (Eigen::LLT<Mat4>(pcm.assembled()).info() != Eigen::Success) {
    throw Error(ErrorKind::NonPhysicalInput, "pair covariance is not positive definite");
  }

  if (q.beta < Quad(0.25 - kPhysicalTolerance)) {
    throw Error(ErrorKind::DegenerateMeasuredMode,
                "measured mode has det below 1/4: " + std::to_string(out.invariants.beta));
  }

  const Quad discPT = clamp_root_argument(q.discPT, q.deltaPT * q.deltaPT,
                                          "partial-transpose discriminant",
                                          kClampPTDiscriminant, out.clamps);
  out.eta_minus = symplectic_roots(q.deltaPT, discPT, q.lam, "eta").minus;

  const Quad discTilde = clamp_root_argument(q.discTilde, q.deltaTilde * q.deltaTilde,
                                             "symplectic discriminant",
                                             kClampDiscriminant, out.clamps);
  const Quad rootTilde = sqrt(discTilde);
  const Quad nuPlus2 = (q.deltaTilde + rootTilde) / 2;
  const Quad nuPlus = sqrt(nuPlus2);
  const Quad nuMinus = sqrt(q.lam / nuPlus2);
  out.nu = {static_cast<double>(nuPlus), static_cast<double>(nuMinus)};
  if (nuMinus < Quad(kVacuumVariance - kPhysicalTolerance)) {
    throw Error(ErrorKind::NonPhysicalInput,
                "symplectic eigenvalue below 1/2: " + std::to_string(out.nu.minus));
  }

  const Quad d = epsilon_discriminant(q);
  out.discriminant = static_cast<double>(d);
  using std::max;
  const Quad t2 = q.theta * q.theta;
  const Quad purity_gap = Quad(0.25) - q.beta;
  Quad eps;
  if (t2 < Quad(kProductThreshold) * max(Quad(1), q.alpha * q.beta) || purity_gap == 0) {
    out.branch = EpsilonBranch::ProductLimit;
    eps = q.alpha;
  } else if (d <= 0) {
    out.branch = EpsilonBranch::NonPositiveDiscriminant;
    eps = epsilon_nonpositive(q, out.clamps);
  } else {
    out.branch = EpsilonBranch::PositiveDiscriminant;
    eps = epsilon_positive(q, out.clamps);
  }
  out.epsilon = static_cast<double>(eps);
  if (!(eps > 0)) {
    throw Error(ErrorKind::NonPhysicalInput,
                "conditional determinant is not positive: " + std::to_string(out.epsilon));
  }

  const Quad discord = entropy(sqrt(max(q.beta, Quad(0.25))), out.clamps) -
                       entropy(nuPlus, out.clamps) - entropy(nuMinus, out.clamps) +
                       entropy(sqrt(eps), out.clamps);
  out.discord = static_cast<double>(discord);
  if (out.discord < 0) {
    if (out.discord <= -kPhysicalTolerance) {
      throw Error(ErrorKind::NonPhysicalInput,
                  "discord negative beyond tolerance: " + std::to_string(out.discord));
    }
    out.discord = 0;
    out.clamps |= kClampDiscord;
  }
  return out;
}

double gaussian_discord(const PairCM& pcm) { return analyze_pair(pcm).discord; }

Eigen::VectorXd symplectic_spectrum(const Eigen::MatrixXd& v) {
  const Eigen::Index n = v.rows() / 2;
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    omega(2 * k, 2 * k + 1) = 1;
    omega(2 * k + 1, 2 * k) = -1;
  }
  const Eigen::MatrixXd sym = (v + v.transpose()) / 2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd values(2 * n);
  if (es.eigenvalues().minCoeff() > 0) {
    // Williamson route: K = V^{1/2} Omega V^{1/2} is antisymmetric with
    // eigenvalues +-i nu, so K^T K has each nu^2 twice.
    const Eigen::MatrixXd root = es.operatorSqrt();
    const Eigen::MatrixXd k = root * omega * root;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ks(k.transpose() * k,
                                                     Eigen::EigenvaluesOnly);
    values = ks.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> gs(omega * sym, false);
    values = gs.eigenvalues().cwiseAbs();
  }
  std::sort(values.data(), values.data() + values.size());
  Eigen::VectorXd out(n);
  for (Eigen::Index k = 0; k < n; ++k) out(k) = values(2 * k);
  return out;
}

PhysicalityReport check_physical(const Cov6& cm) {
  const Mat6& v = cm.matrix();
  PhysicalityReport report;
  const double scale = v.cwiseAbs().maxCoeff();
  report.symmetry_residual =
      scale > 0 ? (v - v.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
  const Mat6 sym = (v + v.transpose()) / 2;
  Eigen::SelfAdjointEigenSolver<Mat6> es(sym, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  report.min_symplectic_eigenvalue = symplectic_spectrum(sym).minCoeff();
  report.passed = report.symmetry_residual <= 1e-12 && report.min_eigenvalue > 0 &&
                  report.min_symplectic_eigenvalue >= kVacuumVariance - kPhysicalTolerance;
  return report;
}

namespace detail {

double epsilon_discriminant(const PairInvariants& inv) {
  return optocorr::epsilon_discriminant(from_double(inv));
}

double epsilon_nonpositive_branch(const PairInvariants& inv) {
  unsigned clamps = 0;
  return epsilon_nonpositive(from_double(inv), clamps);
}

double epsilon_positive_branch(const PairInvariants& inv) {
  unsigned clamps = 0;
  return epsilon_positive(from_double(inv), clamps);
}

}  // namespace detail

}  // namespace optocorr
