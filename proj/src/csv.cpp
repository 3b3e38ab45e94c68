#include "optocorr/csv.hpp"

#include "optocorr/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

namespace optocorr {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> describe_spec(const SweepSpec& s) {
  std::vector<std::string> out;
  const auto kv = [&](const char* key, double v) {
    out.push_back(std::string(key) + " = " + format_double(v));
  };
  out.push_back("label = " + s.label);
  out.push_back("sweep = " + std::string(to_string(s.variable)));
  kv("lo", s.lo);
  kv("hi", s.hi);
  out.push_back("points = " + std::to_string(s.points));
  out.push_back("scale = " + std::string(to_string(s.scale)));
  kv("kappa1", s.kappa1);
  kv("kappa2", s.kappa2);
  kv("gamma", s.gamma_m);
  kv("omega_m", s.omega_m);
  kv("ratio", s.c2_ratio);
  if (s.variable != SweepVariable::C1) kv("C1", s.C1);
  if (s.variable != SweepVariable::r) kv("r", s.r);
  if (s.variable != SweepVariable::T) {
    kv("nth", s.n_th);
    // n_th is canonical; the equivalent temperature is for display only.
    if (s.omega_m > 0) kv("T_equivalent", thermal_temperature(s.n_th, s.omega_m));
  }
  std::string pairs = "pairs = ";
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    if (i) pairs += ",";
    pairs += to_string(s.pairs[i]);
  }
  out.push_back(pairs);
  out.push_back("discord unit = nats; measured mode = second of the pair label");
  return out;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<CorrelationReport>& reports,
                      const std::vector<std::string>& extra_comments) {
  std::string out;
  for (const auto& c : describe_spec(spec)) out += "# " + c + "\n";
  for (const auto& c : extra_comments) out += "# " + c + "\n";
  out += kCsvHeader;
  out += "\n";
  const std::string var(to_string(spec.variable));
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& rep : reports) {
    out += var + "," + format_double(rep.value);
    for (PairLabel p : kAllPairs) {
      const auto& pr = rep.pair(p);
      out += "," + format_double(pr.selected ? pr.eta_minus : nan);
    }
    for (PairLabel p : kAllPairs) {
      const auto& pr = rep.pair(p);
      out += "," + format_double(pr.selected ? pr.discord : nan);
    }
    out += rep.stable ? ",1," : ",0,";
    out += format_double(rep.residual);
    out += "\n";
  }
  return out;
}

namespace {

double parse_field(const std::string& field, int line) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw Error(ErrorKind::ParseError,
                "csv line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

CsvTable read_csv(std::string_view text) {
  CsvTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      table.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw Error(ErrorKind::ParseError, "csv line " + std::to_string(line_no) + ": unexpected header");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 10) {
      throw Error(ErrorKind::ParseError, "csv line " + std::to_string(line_no) + ": expected 10 fields");
    }
    CsvRow row;
    row.swept_var = fields[0];
    row.value = parse_field(fields[1], line_no);
    for (int k = 0; k < 3; ++k) {
      row.eta[k] = parse_field(fields[2 + k], line_no);
      row.disc[k] = parse_field(fields[5 + k], line_no);
    }
    if (fields[8] != "0" && fields[8] != "1") {
      throw Error(ErrorKind::ParseError, "csv line " + std::to_string(line_no) + ": stable must be 0 or 1");
    }
    row.stable = fields[8] == "1";
    row.residual = parse_field(fields[9], line_no);
    table.rows.push_back(row);
  }
  if (!header_seen) throw Error(ErrorKind::ParseError, "csv has no header");
  return table;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::IoError, "output directory '" + dir.string() + "' does not exist");
  }
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::IoError, "cannot open '" + tmp.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp, ec);
      throw Error(ErrorKind::IoError, "write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw Error(ErrorKind::IoError, "cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

}  // namespace optocorr
