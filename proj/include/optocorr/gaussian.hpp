#pragma once

// Two-mode Gaussian state analysis: symplectic invariants, the Simon
// (PPT) entanglement witness and Gaussian quantum discord.
//
// Convention: quadratures are normalised so that the vacuum variance is
// 1/2. All thresholds below (eta < 1/2, f(x) defined for x >= 1/2) rely on
// this.

#include <Eigen/Dense>

#include <array>
#include <string_view>

namespace optocorr {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline constexpr double kVacuumVariance = 0.5;

enum class Mode { O1, O2, M };

/// Row offset of a mode inside the (X1, Y1, X2, Y2, q, p) ordering.
constexpr int mode_offset(Mode m) {
  switch (m) {
    case Mode::O1: return 0;
    case Mode::O2: return 2;
    case Mode::M: return 4;
  }
  return 0;
}

/// A bipartition of the three modes. The second mode of the label is the one
/// measured when computing discord.
enum class PairLabel { MO1, MO2, O1O2 };

inline constexpr std::array<PairLabel, 3> kAllPairs = {
    PairLabel::MO1, PairLabel::MO2, PairLabel::O1O2};

constexpr Mode first_mode(PairLabel p) {
  return p == PairLabel::O1O2 ? Mode::O1 : Mode::M;
}

constexpr Mode second_mode(PairLabel p) {
  switch (p) {
    case PairLabel::MO1: return Mode::O1;
    case PairLabel::MO2: return Mode::O2;
    case PairLabel::O1O2: return Mode::O2;
  }
  return Mode::O2;
}

std::string_view to_string(PairLabel p);

/// Steady-state covariance of the two cavity modes and the mirror.
/// Construction does not validate; use check_physical().
class Cov6 {
 public:
  Cov6() : m_(Mat6::Zero()) {}
  explicit Cov6(const Mat6& m) : m_(m) {}

  const Mat6& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Mat2 local_block(Mode m) const {
    return m_.block<2, 2>(mode_offset(m), mode_offset(m));
  }
  Mat2 cross_block(Mode a, Mode b) const {
    return m_.block<2, 2>(mode_offset(a), mode_offset(b));
  }

 private:
  Mat6 m_;
};

/// Reduced covariance of one mode pair, kept as its three 2x2 blocks.
struct PairCM {
  Mat2 blockA;  // first mode of the label
  Mat2 blockB;  // second mode of the label (measured mode)
  Mat2 cross;   // <first, second> correlations
  PairLabel label = PairLabel::O1O2;

  /// [[blockA, cross], [cross^T, blockB]]
  Mat4 assembled() const;

  static PairCM from_matrix(const Mat4& m, PairLabel label = PairLabel::O1O2);
};

struct PairInvariants {
  double alpha = 0;       // det blockA
  double beta = 0;        // det blockB
  double theta = 0;       // det cross
  double lam = 0;         // det of the assembled 4x4
  double deltaPT = 0;     // alpha + beta - 2 theta
  double deltaTilde = 0;  // alpha + beta + 2 theta
  // deltaPT^2 - 4 lam and deltaTilde^2 - 4 lam, evaluated from the blocks
  // without the cancellation of the literal difference.
  double discPT = 0;
  double discTilde = 0;
};

struct SymplecticPair {
  double plus = 0;
  double minus = 0;
};

PairInvariants pair_invariants(const PairCM& pcm);

/// Smallest symplectic eigenvalue of the partially transposed pair.
/// The pair is entangled iff the result is below 1/2.
double simon_eta_minus(const PairInvariants& inv);

inline bool is_entangled(double eta_minus) { return eta_minus < kVacuumVariance; }

/// f(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2), the von Neumann
/// entropy of a single-mode thermal state with symplectic eigenvalue x.
double entropy_f(double x);

SymplecticPair nu_symplectic(const PairInvariants& inv);

/// Gaussian discord with the measurement on the second mode of the label.
double gaussian_discord(const PairCM& pcm);

enum class EpsilonBranch { ProductLimit, NonPositiveDiscriminant, PositiveDiscriminant };

// Bit flags recording which tolerance clamps fired while analysing a pair.
enum ClampFlag : unsigned {
  kClampPTDiscriminant = 1u << 0,
  kClampDiscriminant = 1u << 1,
  kClampEpsilonRoot = 1u << 2,
  kClampEntropyArgument = 1u << 3,
  kClampDiscord = 1u << 4,
};

/// Everything gaussian-core computes for one pair, plus clamp bookkeeping.
struct PairCorrelations {
  PairInvariants invariants;
  double eta_minus = 0;
  SymplecticPair nu;
  double epsilon = 0;
  double discriminant = 0;
  EpsilonBranch branch = EpsilonBranch::ProductLimit;
  double discord = 0;
  unsigned clamps = 0;
};

PairCorrelations analyze_pair(const PairCM& pcm);

struct PhysicalityReport {
  double symmetry_residual = 0;  // max |V - V^T| / max |V|
  double min_eigenvalue = 0;
  double min_symplectic_eigenvalue = 0;
  bool passed = false;
};

PhysicalityReport check_physical(const Cov6& cm);

/// Symplectic eigenvalues of an n-mode covariance matrix (2n x 2n, ordering
/// (x1, p1, x2, p2, ...)), ascending. Computed from the spectrum of
/// Omega * V, independently of the closed-form two-mode invariants.
Eigen::VectorXd symplectic_spectrum(const Eigen::MatrixXd& v);

namespace detail {

// d = (lam - alpha beta)^2 - (1/4 + beta) theta^2 (alpha + 4 lam)
double epsilon_discriminant(const PairInvariants& inv);
// epsilon for d <= 0 (literal expression, divides by (1/4 - beta)^2)
double epsilon_nonpositive_branch(const PairInvariants& inv);
// epsilon for d > 0
double epsilon_positive_branch(const PairInvariants& inv);

}  // namespace detail

}  // namespace optocorr
