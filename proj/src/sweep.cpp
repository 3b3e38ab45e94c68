#include "optocorr/sweep.hpp"

#include "optocorr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace optocorr {

namespace {

void require_spec(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::InvalidSpec, message);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string curve_label(const char* name, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%g", name, value);
  return buf;
}

}  // namespace

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::T: return "T";
    case SweepVariable::r: return "r";
    case SweepVariable::C1: return "C1";
  }
  return "?";
}

std::string_view to_string(GridScale s) {
  return s == GridScale::Log ? "log" : "linear";
}

SweepVariable parse_sweep_variable(std::string_view text) {
  if (text == "T") return SweepVariable::T;
  if (text == "r") return SweepVariable::r;
  if (text == "C1") return SweepVariable::C1;
  throw Error(ErrorKind::InvalidSpec, "unknown sweep variable '" + std::string(text) + "'");
}

GridScale parse_grid_scale(std::string_view text) {
  if (text == "linear" || text == "lin") return GridScale::Linear;
  if (text == "log") return GridScale::Log;
  throw Error(ErrorKind::InvalidSpec, "unknown grid scale '" + std::string(text) + "'");
}

void SweepSpec::validate() const {
  require_spec(std::isfinite(lo) && std::isfinite(hi), "sweep range must be finite");
  require_spec(lo < hi, "sweep range must satisfy lo < hi");
  require_spec(points >= 2, "sweep needs at least 2 points");
  require_spec(scale == GridScale::Linear || lo > 0, "log-scale sweeps need lo > 0");
  require_spec(lo >= 0, "swept variable must be non-negative");
  require_spec(kappa1 > 0 && kappa2 > 0 && gamma_m > 0, "rates must be positive");
  require_spec(C1 >= 0 && n_th >= 0 && r >= 0, "C1, n_th and r must be non-negative");
  require_spec(c2_ratio >= 0 && std::isfinite(c2_ratio), "C2/C1 ratio must be non-negative");
  require_spec(variable != SweepVariable::T || omega_m > 0, "temperature sweeps need omega_m > 0");
  require_spec(!pairs.empty(), "sweep must select at least one pair");
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      require_spec(pairs[i] != pairs[j], "pair selected twice");
}

ModelParams SweepSpec::at(double value) const {
  double c1 = C1;
  double nth = n_th;
  double squeeze = r;
  switch (variable) {
    case SweepVariable::T: nth = thermal_occupancy(value, omega_m); break;
    case SweepVariable::r: squeeze = value; break;
    case SweepVariable::C1: c1 = value; break;
  }
  return ModelParams::from_squeeze(kappa1, kappa2, gamma_m, c1, c2_ratio * c1, nth, squeeze);
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  spec.validate();
  std::vector<double> grid(spec.points);
  const double last = spec.points - 1;
  for (int k = 0; k < spec.points; ++k) {
    const double t = k / last;
    grid[k] = spec.scale == GridScale::Log
                  ? std::exp(std::log(spec.lo) + t * (std::log(spec.hi) - std::log(spec.lo)))
                  : spec.lo + t * (spec.hi - spec.lo);
  }
  grid.front() = spec.lo;
  grid.back() = spec.hi;
  return grid;
}

CorrelationReport evaluate_point(const SweepSpec& spec, double value) {
  CorrelationReport rep;
  rep.value = value;
  rep.params = spec.at(value);
  const auto sol = solve_lyapunov(LyapunovProblem::from_model(rep.params));
  rep.stable = sol.stability.stable;
  rep.margin = sol.stability.max_real_part;
  rep.residual = sol.residual;
  rep.covariance = sol.covariance;
  if (!(sol.residual <= 1e-10)) {
    throw Error(ErrorKind::ToleranceNotMet,
                "Lyapunov residual " + std::to_string(sol.residual) + " above 1e-10");
  }
  for (PairLabel p : spec.pairs) {
    PairResult& out = rep.pairs[static_cast<int>(p)];
    out.selected = true;
    out.details = analyze_pair(reduce_pair(sol.covariance, p));
    out.eta_minus = out.details.eta_minus;
    out.entangled = is_entangled(out.eta_minus);
    out.discord = out.details.discord;
  }
  return rep;
}

std::vector<CorrelationReport> run_sweep(const SweepSpec& spec) {
  const auto grid = sweep_grid(spec);
  std::vector<CorrelationReport> out;
  out.reserve(grid.size());
  for (double value : grid) {
    try {
      out.push_back(evaluate_point(spec, value));
    } catch (const Error& e) {
      CorrelationReport rep;
      rep.value = value;
      rep.failure = e.kind();
      rep.failure_message = e.what();
      try {
        rep.params = spec.at(value);
        const auto verdict = is_stable(build_drift(rep.params));
        rep.stable = verdict.stable;
        rep.margin = verdict.max_real_part;
      } catch (const Error&) {
        rep.stable = false;
      }
      rep.residual = kNaN;
      for (PairLabel p : spec.pairs) {
        PairResult& pr = rep.pairs[static_cast<int>(p)];
        pr.selected = true;
        pr.eta_minus = kNaN;
        pr.discord = kNaN;
      }
      out.push_back(rep);
    }
  }
  return out;
}

namespace {

double metric(const CorrelationReport& rep, PairLabel pair, ThresholdQuantity q) {
  if (rep.failure) return kNaN;
  const PairResult& pr = rep.pair(pair);
  switch (q) {
    case ThresholdQuantity::EtaCrossing: return pr.eta_minus - kVacuumVariance;
    case ThresholdQuantity::EtaMinimum: return pr.eta_minus;
    case ThresholdQuantity::DiscordMaximum: return -pr.discord;
  }
  return kNaN;
}

}  // namespace

double find_threshold(const SweepSpec& spec, PairLabel pair, ThresholdQuantity quantity) {
  SweepSpec s = spec;
  if (std::find(s.pairs.begin(), s.pairs.end(), pair) == s.pairs.end()) s.pairs.push_back(pair);
  const auto reports = run_sweep(s);
  const bool log_scale = s.scale == GridScale::Log;
  const auto to_u = [&](double x) { return log_scale ? std::log(x) : x; };
  const auto to_x = [&](double u) { return log_scale ? std::exp(u) : u; };
  const auto eval = [&](double u) { return metric(evaluate_point(s, to_x(u)), pair, quantity); };
  const auto converged = [&](double a, double b) {
    const double xa = to_x(a), xb = to_x(b);
    const double ref = std::max({std::abs(xa), std::abs(xb), 1e-12 * (s.hi - s.lo)});
    return std::abs(xb - xa) <= 1e-4 * ref;
  };

  std::vector<double> m(reports.size());
  for (std::size_t k = 0; k < reports.size(); ++k) m[k] = metric(reports[k], pair, quantity);

  if (quantity == ThresholdQuantity::EtaCrossing) {
    for (std::size_t k = 0; k + 1 < m.size(); ++k) {
      if (std::isnan(m[k]) || std::isnan(m[k + 1])) continue;
      if ((m[k] < 0) == (m[k + 1] < 0)) continue;
      double a = to_u(reports[k].value), b = to_u(reports[k + 1].value);
      const bool a_below = m[k] < 0;
      while (!converged(a, b)) {
        const double mid = 0.5 * (a + b);
        if ((eval(mid) < 0) == a_below) a = mid; else b = mid;
      }
      return to_x(0.5 * (a + b));
    }
    throw Error(ErrorKind::NotBracketed,
                "eta_minus of " + std::string(to_string(pair)) + " does not cross 1/2 on the grid");
  }

  std::size_t best = m.size();
  for (std::size_t k = 0; k < m.size(); ++k)
    if (!std::isnan(m[k]) && (best == m.size() || m[k] < m[best])) best = k;
  if (best == m.size() || best == 0 || best + 1 == m.size() ||
      std::isnan(m[best - 1]) || std::isnan(m[best + 1])) {
    throw Error(ErrorKind::NotBracketed, "extremum of " + std::string(to_string(pair)) +
                                             " is not interior to the sweep range");
  }

  // Golden-section search on [u_{k-1}, u_{k+1}].
  const double invphi = (std::sqrt(5.0) - 1) / 2;
  double a = to_u(reports[best - 1].value), b = to_u(reports[best + 1].value);
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = eval(c), fd = eval(d);
  while (!converged(a, b)) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - invphi * (b - a); fc = eval(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + invphi * (b - a); fd = eval(d);
    }
  }
  return to_x(0.5 * (a + b));
}

std::vector<SweepSpec> figure_preset(std::string_view name) {
  using namespace presets;
  std::vector<SweepSpec> out;
  SweepSpec base;
  base.points = 400;
  base.kappa1 = base.kappa2 = kKappa;
  base.omega_m = kOmegaM;
  base.c2_ratio = 2.0;

  if (name == "fig2" || name == "fig5") {
    base.variable = SweepVariable::T;
    base.scale = GridScale::Log;
    base.lo = 1e-5;
    base.hi = 0.1;
    base.gamma_m = kGammaTemperatureFigures;
    base.C1 = 35;
    for (double r : kSqueezeCurves) {
      SweepSpec s = base;
      s.r = r;
      s.label = curve_label("r", r);
      out.push_back(s);
    }
  } else if (name == "fig3" || name == "fig6") {
    base.variable = SweepVariable::r;
    base.scale = GridScale::Linear;
    base.lo = 0;
    base.hi = 4.5;
    base.gamma_m = kGammaSqueezeFigures;
    base.n_th = 1e-3;
    for (double c1 : kCooperativityCurves) {
      SweepSpec s = base;
      s.C1 = c1;
      s.label = curve_label("C1", c1);
      out.push_back(s);
    }
  } else if (name == "fig4" || name == "fig7") {
    base.variable = SweepVariable::C1;
    base.scale = GridScale::Log;
    base.lo = 1e-2;
    base.hi = 1e6;
    base.gamma_m = kGammaSqueezeFigures;
    base.n_th = 1e-2;
    for (double r : kSqueezeCurves) {
      SweepSpec s = base;
      s.r = r;
      s.label = curve_label("r", r);
      out.push_back(s);
    }
  } else {
    throw Error(ErrorKind::UnknownPreset, "unknown preset '" + std::string(name) + "'");
  }
  return out;
}

}  // namespace optocorr
