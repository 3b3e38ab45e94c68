#include "optocorr/config.hpp"
#include "optocorr/lyapunov.hpp"
#include "optocorr/sweep.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace optocorr;

namespace {

PairLabel parse_pair(const std::string& s) {
  for (PairLabel p : kAllPairs)
    if (to_string(p) == s) return p;
  throw Error(ErrorKind::InvalidSpec, "unknown pair label '" + s + "' (expected mo1, mo2 or o1o2)");
}

py::dict pair_dict(const PairCorrelations& c) {
  py::dict d;
  d["eta_minus"] = c.eta_minus;
  d["entangled"] = is_entangled(c.eta_minus);
  d["discord"] = c.discord;
  d["nu_plus"] = c.nu.plus;
  d["nu_minus"] = c.nu.minus;
  d["epsilon"] = c.epsilon;
  return d;
}

py::dict report_dict(const CorrelationReport& rep) {
  py::dict d;
  d["value"] = rep.value;
  d["stable"] = rep.stable;
  d["margin"] = rep.margin;
  d["residual"] = rep.residual;
  d["covariance"] = rep.covariance.matrix();
  py::dict pairs;
  for (PairLabel p : kAllPairs)
    if (rep.pair(p).selected) pairs[py::str(std::string(to_string(p)))] = pair_dict(rep.pair(p).details);
  d["pairs"] = pairs;
  return d;
}

// Column arrays for one curve; failed points carry NaN.
py::dict curve_dict(const SweepSpec& spec, const std::vector<CorrelationReport>& reps) {
  py::dict d;
  d["label"] = spec.label;
  d["variable"] = std::string(to_string(spec.variable));
  std::vector<double> x, res;
  std::vector<bool> stable;
  for (const auto& rep : reps) {
    x.push_back(rep.value);
    res.push_back(rep.residual);
    stable.push_back(rep.stable);
  }
  d["value"] = x;
  d["residual"] = res;
  d["stable"] = stable;
  for (PairLabel p : kAllPairs) {
    std::vector<double> eta, disc;
    for (const auto& rep : reps) {
      eta.push_back(rep.pair(p).eta_minus);
      disc.push_back(rep.pair(p).discord);
    }
    const std::string name(to_string(p));
    d[py::str("eta_" + name)] = eta;
    d[py::str("discord_" + name)] = disc;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steady-state Gaussian correlations of a two-cavity optomechanical system";

  static py::exception<Error> exc(m, "OptocorrError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::tuple args = py::make_tuple(std::string(to_string(e.kind())), exit_code(e.kind()), e.what());
      PyErr_SetObject(exc.ptr(), args.ptr());
    }
  });

  m.def(
      "analyze_pair",
      [](const Mat4& v, const std::string& label) {
        return pair_dict(analyze_pair(PairCM::from_matrix(v, parse_pair(label))));
      },
      py::arg("covariance"), py::arg("label") = "o1o2",
      "Simon eta_minus and Gaussian discord (nats) of a 4x4 covariance. Vacuum variance is 1/2.");

  m.def(
      "solve_point",
      [](double kappa1, double kappa2, double gamma, double C1, double C2, double n_th, double r) {
        const auto mp = ModelParams::from_squeeze(kappa1, kappa2, gamma, C1, C2, n_th, r);
        const auto sol = solve_lyapunov(LyapunovProblem::from_model(mp));
        CorrelationReport rep;
        rep.value = C1;
        rep.params = mp;
        rep.covariance = sol.covariance;
        rep.residual = sol.residual;
        rep.stable = sol.stability.stable;
        rep.margin = sol.stability.max_real_part;
        for (PairLabel p : kAllPairs) {
          auto& pr = rep.pairs[static_cast<int>(p)];
          pr.selected = true;
          pr.details = analyze_pair(reduce_pair(sol.covariance, p));
        }
        return report_dict(rep);
      },
      py::arg("kappa1"), py::arg("kappa2"), py::arg("gamma"), py::arg("C1"), py::arg("C2"),
      py::arg("n_th"), py::arg("r"), "Steady state at one parameter point (rates in rad/s).");

  m.def(
      "run_preset",
      [](const std::string& name, int points) {
        py::list out;
        for (auto spec : figure_preset(name)) {
          if (points > 0) spec.points = points;
          out.append(curve_dict(spec, run_sweep(spec)));
        }
        return out;
      },
      py::arg("name"), py::arg("points") = 0, "All curves of a figure preset as column arrays.");

  m.def(
      "run_config",
      [](const std::string& text) {
        const RunConfig cfg = parse_config(text);
        if (cfg.mode == RunMode::Point) return py::object(report_dict(evaluate_point(cfg.spec, cfg.point_value)));
        if (cfg.mode == RunMode::Sweep) {
          py::list l;
          l.append(curve_dict(cfg.spec, run_sweep(cfg.spec)));
          return py::object(l);
        }
        if (cfg.mode == RunMode::Preset) {
          py::list l;
          for (const auto& s : cfg.preset_specs) l.append(curve_dict(s, run_sweep(s)));
          return py::object(l);
        }
        throw Error(ErrorKind::InvalidSpec, "physical-convert is only available from the command line");
      },
      py::arg("text"), "Runs a configuration given as `key = value` text and returns the results.");

  m.def("thermal_occupancy", &thermal_occupancy, py::arg("temperature"), py::arg("omega_m"));
  m.def("thermal_temperature", &thermal_temperature, py::arg("n_th"), py::arg("omega_m"));
  m.attr("presets") = std::vector<std::string>(kPresetNames.begin(), kPresetNames.end());
}
