#include "optocorr/cli.hpp"
#include "optocorr/csv.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace optocorr;
namespace fs = std::filesystem;

namespace {

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an optocorr::Error");
  return Error(ErrorKind::IoError, "");
}

const char* kPointConfig = R"(# decoupled vacuum point
mode = point
kappa1 = "2pi*215e3"
kappa2 = 2pi*215e3     # quotes are optional
gamma = "2pi*1500"
C1 = 0
r = 0
nth = 0
)";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("optocorr_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Proc {
  int code;
  std::string err;
};

Proc run_cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(OPTOCORR_CLI) + " " + args + " >/dev/null 2>" + err.string();
  const int status = std::system(cmd.c_str());
  std::ifstream f(err);
  std::stringstream ss;
  ss << f.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

}  // namespace

TEST_CASE("rate shorthand") {
  const auto cfg = parse_config(kPointConfig);
  CHECK(cfg.mode == RunMode::Point);
  CHECK(cfg.spec.kappa1 == doctest::Approx(1.35088e6).epsilon(1e-5));
  CHECK(cfg.spec.kappa1 == constants::kTwoPi * 215e3);
  CHECK(cfg.spec.kappa2 == cfg.spec.kappa1);
  CHECK(parse_value("kappa1", {"1.5e6", 1}) == 1.5e6);
  CHECK(parse_value("gamma", {"2pi * 140", 1}) == constants::kTwoPi * 140);
}

TEST_CASE("unit and parse errors") {
  CHECK(error_of([] { parse_value("C1", {"2pi*35", 3}); }).kind() == ErrorKind::UnitError);
  CHECK(error_of([] { parse_value("kappa1", {"215 kHz", 3}); }).kind() == ErrorKind::UnitError);
  CHECK(error_of([] { parse_value("T", {"5mK", 3}); }).kind() == ErrorKind::UnitError);
  CHECK(error_of([] { parse_value("C1", {"3.5.1", 3}); }).kind() == ErrorKind::ParseError);
  CHECK(error_of([] { parse_value("C1", {"abc", 3}); }).kind() == ErrorKind::ParseError);
  CHECK(error_of([] { parse_value("kappa1", {"2pi/3", 3}); }).kind() == ErrorKind::ParseError);

  const auto missing_eq = error_of([] { parse_config_text("mode = point\nC1 35\n"); });
  CHECK(missing_eq.kind() == ErrorKind::ParseError);
  CHECK(std::string(missing_eq.what()).find("line 2") != std::string::npos);

  const auto dup = error_of([] { parse_config_text("C1 = 1\nC1 = 2\n"); });
  CHECK(dup.kind() == ErrorKind::ParseError);
  CHECK(std::string(dup.what()).find("duplicate") != std::string::npos);

  CHECK(error_of([] { parse_config_text("preset = \"fig2\n"); }).kind() == ErrorKind::ParseError);
  CHECK(error_of([] { parse_config_text("C1 =\n"); }).kind() == ErrorKind::ParseError);
  CHECK(error_of([] { parse_config("mode = orbit\n"); }).kind() == ErrorKind::ParseError);
}

TEST_CASE("unknown keys are errors with line context") {
  const auto e = error_of([] { parse_config_text("mode = point\n\n# note\nkappa = 1\n"); });
  CHECK(e.kind() == ErrorKind::UnknownKey);
  CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  CHECK(std::string(e.what()).find("kappa") != std::string::npos);
  CHECK(error_of([] { parse_config("", {{"bogus", {"1", 0}}}); }).kind() == ErrorKind::UnknownKey);
}

TEST_CASE("missing required key is named") {
  std::string text = kPointConfig;
  text.replace(text.find("C1 = 0"), 6, "");
  const auto e = error_of([&] { parse_config(text); });
  CHECK(e.kind() == ErrorKind::MissingKey);
  CHECK(std::string(e.what()).find("'C1'") != std::string::npos);
}

TEST_CASE("command-line overrides win") {
  const auto base = parse_config(kPointConfig);
  CHECK(base.spec.r == 0.0);
  const auto cfg = parse_config(kPointConfig, {{"r", {"0.5", 0}}});
  CHECK(cfg.spec.r == 0.5);

  // --T replaces a file nth (T needs omega_m).
  const auto hot = parse_config(kPointConfig, {{"T", {"1e-3", 0}}, {"omega_m", {"2pi*947e3", 0}}});
  CHECK(hot.spec.n_th == doctest::Approx(thermal_occupancy(1e-3, constants::kTwoPi * 947e3)).epsilon(1e-15));
  CHECK(error_of([] { parse_config(std::string(kPointConfig) + "T = 1e-3\n"); }).kind() ==
        ErrorKind::ParseError);
  CHECK(error_of([] { parse_config(kPointConfig, {{"T", {"1e-3", 0}}}); }).kind() ==
        ErrorKind::MissingKey);
}

TEST_CASE("sweep and preset configuration") {
  const auto sw = parse_config(
      "mode = sweep\nsweep = r\nlo = 0\nhi = 2\npoints = 11\nkappa1 = 2pi*215e3\n"
      "kappa2 = 2pi*215e3\ngamma = 2pi*140\nC1 = 25\nnth = 1e-3\nout = x.csv\n");
  CHECK(sw.spec.variable == SweepVariable::r);
  CHECK(sw.spec.scale == GridScale::Linear);
  CHECK(sw.spec.points == 11);
  CHECK(sw.spec.c2_ratio == 2.0);
  CHECK(error_of([] {
          parse_config("mode = sweep\nsweep = r\nlo = 0\nhi = 2\nkappa1 = 1\nkappa2 = 1\n"
                       "gamma = 1\nC1 = 1\nnth = 0\nr = 1\nout = x.csv\n");
        }).kind() == ErrorKind::InvalidSpec);
  CHECK(error_of([] { parse_config("mode = sweep\nsweep = r\n"); }).kind() == ErrorKind::MissingKey);

  const auto pr = parse_config("preset = fig2\n", {{"points", {"20", 0}}});
  CHECK(pr.mode == RunMode::Preset);
  CHECK(pr.preset_specs.size() == 5);
  CHECK(pr.preset_specs.front().points == 20);
  const auto one = parse_config("preset = fig2\nr = 0.5\n");
  REQUIRE(one.preset_specs.size() == 1);
  CHECK(one.preset_specs.front().r == 0.5);
  const auto some = parse_config("preset = fig3\ncurves = 10, 20\n");
  REQUIRE(some.preset_specs.size() == 2);
  CHECK(some.preset_specs.back().C1 == 20.0);
  CHECK(error_of([] { parse_config("preset = fig2\nT = 1\n"); }).kind() == ErrorKind::InvalidSpec);
  CHECK(error_of([] { parse_config("preset = fig9\n"); }).kind() == ErrorKind::UnknownPreset);
  CHECK(error_of([] { parse_config("mode = point\npreset = fig2\n"); }).kind() == ErrorKind::ParseError);
}

TEST_CASE("point mode on the vacuum steady state") {
  const auto cfg = parse_config(kPointConfig);
  std::ostringstream out, err;
  run(cfg, out, err);
  const auto rep = evaluate_point(cfg.spec, cfg.point_value);
  for (PairLabel p : kAllPairs) {
    CHECK(rep.pair(p).eta_minus == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.pair(p).discord == doctest::Approx(0).epsilon(1e-12).scale(1));
  }
  CHECK(out.str().find("pair o1o2: eta_minus = 0.5") != std::string::npos);
}

TEST_CASE("CSV round trip is bitwise") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 2000; ++k) {
    const double v = u(rng) * std::pow(10.0, 40 * u(rng));
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  SweepSpec s = figure_preset("fig2")[3];
  s.points = 40;
  s.pairs = {PairLabel::MO1, PairLabel::O1O2};
  const auto reps = run_sweep(s);
  const auto table = read_csv(sweep_csv(s, reps));
  REQUIRE(table.rows.size() == reps.size());
  CHECK_FALSE(table.comments.empty());
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& row = table.rows[i];
    CHECK(row.swept_var == "T");
    CHECK(row.value == reps[i].value);
    CHECK(row.eta[0] == reps[i].pair(PairLabel::MO1).eta_minus);
    CHECK(std::isnan(row.eta[1]));
    CHECK(row.eta[2] == reps[i].pair(PairLabel::O1O2).eta_minus);
    CHECK(row.disc[2] == reps[i].pair(PairLabel::O1O2).discord);
    CHECK(row.stable);
    CHECK(row.residual == reps[i].residual);
  }
  CHECK(error_of([] { read_csv("a,b\n"); }).kind() == ErrorKind::ParseError);
}

TEST_CASE("atomic writes") {
  const fs::path dir = fresh_dir("atomic");
  const fs::path target = dir / "out.csv";
  write_atomic(target, "first\n");
  write_atomic(target, "second\n");
  std::ifstream f(target);
  std::string line;
  std::getline(f, line);
  CHECK(line == "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);  // no temporary left behind
  CHECK(error_of([&] { write_atomic(dir / "missing" / "x.csv", "x"); }).kind() == ErrorKind::IoError);
}

TEST_CASE("exit codes are total and distinct") {
  std::set<int> codes;
  for (ErrorKind k : kAllErrorKinds) {
    const int c = exit_code(k);
    CHECK(c > 1);
    CHECK(c < 126);
    codes.insert(c);
    CHECK_FALSE(to_string(k).empty());
  }
  CHECK(codes.size() == std::size(kAllErrorKinds));
  const std::string line = error_line(Error(ErrorKind::UnknownKey, "line 3: unknown key \"x\""));
  CHECK(line == "error kind=UnknownKey code=4 message=\"line 3: unknown key \\\"x\\\"\"");
}

TEST_CASE("cli binary end to end") {
  const fs::path dir = fresh_dir("cli");
  const fs::path cfg = dir / "point.cfg";
  std::ofstream(cfg) << kPointConfig;

  CHECK(run_cli("--config " + cfg.string() + " --r 0.5", dir).code == 0);

  const fs::path csv = dir / "sweep.csv";
  const auto ok = run_cli("--mode sweep --sweep T --lo 1e-4 --hi 1e-2 --points 7 --kappa1 2pi*215e3 "
                          "--kappa2 2pi*215e3 --gamma 2pi*1500 --omega_m 2pi*947e3 --C1 35 --r 0.5 --out " +
                              csv.string(),
                          dir);
  CHECK(ok.code == 0);
  REQUIRE(fs::exists(csv));
  std::ifstream in(csv);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(read_csv(text.str()).rows.size() == 7);

  // An invalid configuration fails with the mapped code and leaves no file.
  const fs::path bad_out = dir / "bad.csv";
  const auto bad = run_cli("--mode sweep --sweep T --lo 1e-4 --hi 1e-2 --kappa1 215kHz --out " +
                               bad_out.string(),
                           dir);
  CHECK(bad.code == exit_code(ErrorKind::UnitError));
  CHECK(bad.err.rfind("error kind=UnitError code=3 ", 0) == 0);
  CHECK_FALSE(fs::exists(bad_out));

  const auto unknown = run_cli("--preset fig11 --out " + dir.string(), dir);
  CHECK(unknown.code == exit_code(ErrorKind::UnknownPreset));

  const fs::path bad_cfg = dir / "bad.cfg";
  std::ofstream(bad_cfg) << "mode = point\nkapa1 = 3\n";
  const auto typo = run_cli("--config " + bad_cfg.string(), dir);
  CHECK(typo.code == exit_code(ErrorKind::UnknownKey));
  CHECK(typo.err.find("line 2") != std::string::npos);

  CHECK(run_cli("--config " + (dir / "nope.cfg").string(), dir).code == exit_code(ErrorKind::IoError));
  CHECK(run_cli("--no-such-flag", dir).code == exit_code(ErrorKind::ParseError));

  const auto conv = run_cli("--mode physical-convert", dir);
  CHECK(conv.code == 0);
}

TEST_CASE("preset fig2 writes one CSV per curve") {
  const fs::path dir = fresh_dir("preset");
  auto cfg = parse_config("preset = fig2\npoints = 12\nout = \"" + dir.string() + "\"\n");
  std::ostringstream out, err;
  const auto files = run(cfg, out, err);
  CHECK(files.size() == 5);
  for (const auto& f : files) {
    CHECK(fs::exists(f));
    std::ifstream in(f);
    std::stringstream text;
    text << in.rdbuf();
    const auto table = read_csv(text.str());
    CHECK(table.rows.size() == 12);
    bool has_preset = false;
    for (const auto& c : table.comments) has_preset |= c == "preset = fig2";
    CHECK(has_preset);
  }
  CHECK(files.front().filename() == "fig2_r0.csv");
}
