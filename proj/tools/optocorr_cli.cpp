// optocorr: steady-state correlations of the two-cavity optomechanical system.
//
//   optocorr --mode point --config point.cfg --r 0.5
//   optocorr --preset fig2 --out data/

#include "optocorr/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw optocorr::Error(optocorr::ErrorKind::IoError, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state entanglement and Gaussian discord of a two-cavity optomechanical system"};

  std::string config_path;
  app.add_option("--config", config_path, "flat key = value configuration file");

  // Every override is kept as text and parsed with the same rules as the file.
  struct Flag {
    const char* flag;
    const char* key;
    const char* help;
  };
  const Flag flags[] = {
      {"--mode", "mode", "point | sweep | preset | physical-convert"},
      {"--out", "out", "output CSV (sweep/point) or directory (preset)"},
      {"--preset", "preset", "fig2 ... fig7"},
      {"--curves", "curves", "preset curve values, comma separated"},
      {"--sweep", "sweep", "swept variable: T, r, C1"},
      {"--lo", "lo", "sweep start"},
      {"--hi", "hi", "sweep end"},
      {"--points", "points", "grid points"},
      {"--scale", "scale", "linear | log"},
      {"--pairs", "pairs", "subset of mo1,mo2,o1o2"},
      {"--C1", "C1", "cooperativity of cavity 1"},
      {"--C2", "C2", "cooperativity of cavity 2"},
      {"--ratio", "ratio", "C2 / C1"},
      {"--r", "r", "squeezing parameter"},
      {"--nth", "nth", "mirror bath occupancy"},
      {"--T", "T", "mirror bath temperature, K"},
      {"--kappa1", "kappa1", "cavity 1 decay, rad/s (2pi*X accepted)"},
      {"--kappa2", "kappa2", "cavity 2 decay, rad/s (2pi*X accepted)"},
      {"--gamma", "gamma", "mechanical damping, rad/s (2pi*X accepted)"},
      {"--omega_m", "omega_m", "mechanical frequency, rad/s (2pi*X accepted)"},
  };
  std::vector<std::string> values(std::size(flags));
  std::vector<CLI::Option*> options;
  for (std::size_t i = 0; i < std::size(flags); ++i) {
    options.push_back(app.add_option(flags[i].flag, values[i], flags[i].help));
  }
  int verbose = 0;
  app.add_flag("-v,--verbose", verbose, "diagnostics on stderr (repeat for more)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return 0;
    std::cerr << optocorr::error_line(optocorr::Error(optocorr::ErrorKind::ParseError, e.what())) << "\n";
    return optocorr::exit_code(optocorr::ErrorKind::ParseError);
  }

  try {
    optocorr::ConfigMap overrides;
    for (std::size_t i = 0; i < std::size(flags); ++i) {
      if (options[i]->count() > 0) overrides[flags[i].key] = {values[i], 0};
    }
    if (verbose > 0) overrides["verbose"] = {std::to_string(verbose), 0};

    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    const auto cfg = optocorr::parse_config(text, overrides);
    optocorr::run(cfg, std::cout, std::cerr);
    return 0;
  } catch (const optocorr::Error& e) {
    std::cerr << optocorr::error_line(e) << "\n";
    return optocorr::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error kind=Internal code=1 message=\"" << e.what() << "\"\n";
    return 1;
  }
}
