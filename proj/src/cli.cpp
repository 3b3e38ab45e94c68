#include "optocorr/cli.hpp"

#include "optocorr/csv.hpp"

#include <cmath>
#include <ostream>

namespace optocorr {

namespace {

void print_report(const CorrelationReport& rep, std::ostream& out) {
  const ModelParams& p = rep.params;
  out << "kappa1 = " << format_double(p.kappa1) << "\n"
      << "kappa2 = " << format_double(p.kappa2) << "\n"
      << "gamma = " << format_double(p.gamma_m) << "\n"
      << "C1 = " << format_double(p.C1) << "\n"
      << "C2 = " << format_double(p.C2) << "\n"
      << "nth = " << format_double(p.n_th) << "\n"
      << "N = " << format_double(p.N) << "\n"
      << "M = " << format_double(p.M) << "\n"
      << "stable = " << (rep.stable ? 1 : 0) << "\n"
      << "margin = " << format_double(rep.margin) << "\n"
      << "residual = " << format_double(rep.residual) << "\n";
  for (PairLabel l : kAllPairs) {
    const PairResult& pr = rep.pair(l);
    if (!pr.selected) continue;
    out << "pair " << to_string(l) << ": eta_minus = " << format_double(pr.eta_minus)
        << ", entangled = " << (pr.entangled ? "yes" : "no")
        << ", discord = " << format_double(pr.discord) << "\n";
  }
}

int count_clamps(const std::vector<CorrelationReport>& reps) {
  int n = 0;
  for (const auto& r : reps)
    for (const auto& pr : r.pairs) n += pr.details.clamps != 0;
  return n;
}

void sweep_diagnostics(const SweepSpec& s, const std::vector<CorrelationReport>& reps,
                       int verbosity, std::ostream& err) {
  int flagged = 0;
  for (const auto& r : reps) {
    if (!r.failure) continue;
    ++flagged;
    if (verbosity > 0) {
      err << "warning: " << s.label << " value=" << format_double(r.value) << " flagged ("
          << to_string(*r.failure) << "): " << r.failure_message << "\n";
    }
  }
  if (flagged) err << "warning: " << s.label << ": " << flagged << " flagged point(s)\n";
  if (verbosity > 0) {
    err << "info: " << s.label << ": " << reps.size() << " points, " << count_clamps(reps)
        << " pair evaluation(s) with tolerance clamps\n";
  }
}

void physical_convert(const PhysicalParams& p, std::ostream& out) {
  const ModelParams mp = to_model_params(p);
  for (int j = 1; j <= 2; ++j) {
    const auto c = cooperativity(p, j);
    const auto ss = steady_state(p, j);
    out << "cavity " << j << ":\n"
        << "  omega_L = " << format_double(p.omega_laser(j)) << "\n"
        << "  C = " << format_double(c.cooperativity) << "\n"
        << "  g = " << format_double(c.single_photon_coupling) << "\n"
        << "  drive = " << format_double(c.drive) << "\n"
        << "  n_cav = " << format_double(c.photon_number) << "\n"
        << "  a_s = " << format_double(ss.a_s.real()) << " + " << format_double(ss.a_s.imag()) << "i\n"
        << "  phi = " << format_double(ss.input_phase) << "\n"
        << "  detuning_effective = " << format_double(ss.effective_detuning) << "\n"
        << "  detuning_bare = " << format_double(ss.bare_detuning) << "\n";
  }
  const auto b = steady_state(p, 1).b_s;
  out << "b_s = " << format_double(b.real()) << " + " << format_double(b.imag()) << "i\n"
      << "nth = " << format_double(mp.n_th) << "\n"
      << "N = " << format_double(mp.N) << "\n"
      << "M = " << format_double(mp.M) << "\n"
      << "C2/C1 = " << format_double(mp.C2 / mp.C1) << "\n";

  // The stated C1 cannot be reproduced from the raw list; report both readings.
  const double c1 = mp.C1;
  PhysicalParams laser_reading = p;
  laser_reading.omega_c[0] = p.omega_laser(1);
  laser_reading.omega_c[1] = p.omega_laser(2);
  const double c1_laser = cooperativity(laser_reading, 1).cooperativity;
  out << "note: computed C1 = " << format_double(c1) << " versus stated C1 = "
      << format_double(kStatedC1) << " (ratio " << format_double(c1 / kStatedC1) << ")\n"
      << "note: with omega_c set to the laser frequency, C1 = " << format_double(c1_laser)
      << " (ratio " << format_double(c1_laser / kStatedC1) << ")\n"
      << "note: sweep presets take C1 directly; these values are diagnostics only\n";
}

}  // namespace

std::string preset_file_name(const std::string& preset, const SweepSpec& spec) {
  std::string label;
  for (char c : spec.label)
    if (c != '=') label += c;
  return preset + "_" + label + ".csv";
}

std::string error_line(const Error& e) {
  std::string msg;
  for (char c : std::string(e.what())) {
    if (c == '"' || c == '\\') msg += '\\';
    msg += c == '\n' ? ' ' : c;
  }
  return "error kind=" + std::string(to_string(e.kind())) + " code=" +
         std::to_string(exit_code(e.kind())) + " message=\"" + msg + "\"";
}

std::vector<std::filesystem::path> run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  std::vector<fs::path> written;
  switch (cfg.mode) {
    case RunMode::Point: {
      const CorrelationReport rep = evaluate_point(cfg.spec, cfg.point_value);
      print_report(rep, out);
      if (!cfg.out.empty()) {
        SweepSpec s = cfg.spec;
        s.label = "point";
        write_atomic(cfg.out, sweep_csv(s, {rep}));
        written.emplace_back(cfg.out);
      }
      break;
    }
    case RunMode::Sweep: {
      const auto reps = run_sweep(cfg.spec);
      sweep_diagnostics(cfg.spec, reps, cfg.verbosity, err);
      write_atomic(cfg.out, sweep_csv(cfg.spec, reps));
      written.emplace_back(cfg.out);
      break;
    }
    case RunMode::Preset: {
      const fs::path dir(cfg.out);
      std::error_code ec;
      if (!fs::is_directory(dir, ec)) {
        throw Error(ErrorKind::IoError, "preset output directory '" + cfg.out + "' does not exist");
      }
      std::vector<std::pair<fs::path, std::string>> files;
      for (const SweepSpec& s : cfg.preset_specs) {
        const auto reps = run_sweep(s);
        sweep_diagnostics(s, reps, cfg.verbosity, err);
        files.emplace_back(dir / preset_file_name(cfg.preset, s),
                           sweep_csv(s, reps, {"preset = " + cfg.preset}));
      }
      for (const auto& [path, text] : files) {
        write_atomic(path, text);
        written.push_back(path);
        out << path.string() << "\n";
      }
      break;
    }
    case RunMode::PhysicalConvert:
      physical_convert(cfg.physical, out);
      break;
  }
  return written;
}

}  // namespace optocorr
