#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace singreg::cli {

struct MollifierConfig {
  std::string profile = "bump";  // bump | moment-vanishing
  std::string scale = "log";     // log | loglog | power
  double gamma = 1.0;            // power law exponent
  double amplitude = 1.0;        // a
  bool operator==(const MollifierConfig&) const = default;
};

struct FracConfig {
  double alpha = 0.5;
  double T = 1.0;
  double h = 1e-3;
  bool operator==(const FracConfig&) const = default;
};

struct VolterraConfig {
  double alpha = 1.0;
  std::string model = "linear";  // zero | linear | power | sqrt | step | quadratic | extremal
  double gamma = 0.5;
  double b = 0.5;
  double coefficient = 1.0;
  std::string free_term = "constant";  // constant | delta
  double free_value = 1.0;
  double free_position = 0.5;
  double X = 1.0;
  int points = 1024;
  double eps = 0.0;                // solution sample ε (0: unmollified kernel)
  std::string oracle = "none";     // none | free | exp | mittag-leffler
  double oracle_tol = 1e-4;
  double shift_s = 3.0;
  bool negative_control = false;   // expect the envelope to fail
  bool operator==(const VolterraConfig&) const = default;
};

struct EvolutionConfig {
  std::string variant = "plain";  // plain | conservative | potential
  int dim = 1;
  double half_width = 8.0;
  int points = 2048;
  double T = 1.0;
  double dt = 1e-3;
  std::string data = "gaussian";  // gaussian | delta
  std::string model = "none";     // none | linear | power | sqrt | step | quadratic
  double gamma = 0.5;
  double b = 0.5;
  double coefficient = 1.0;
  std::string potential = "none";  // none | delta | gaussian
  double potential_exponent = 0.5;  // c
  double potential_strength = 1.0;
  bool mollify_kernel = true;
  double p = std::numeric_limits<double>::infinity();
  double shift_s = 3.0;
  int csv_stride = 10;
  bool operator==(const EvolutionConfig&) const = default;
};

struct SchrodingerConfig {
  int dim = 1;
  double half_width = 16.0;
  int points = 1024;
  double T = 1.0;
  double dt = 1e-3;
  std::string potential = "none";  // none | delta | gaussian
  double potential_exponent = 0.5;
  double potential_strength = 1.0;
  int beta = 0;
  double t = 1.0;  // time of the sup-bound table
  bool operator==(const SchrodingerConfig&) const = default;
};

struct SweepConfig {
  int dim = 1;
  double p = std::numeric_limits<double>::infinity();
  double half_width = 8.0;
  int points = 8192;
  double T = 0.1;
  double dt = 1e-3;
  bool operator==(const SweepConfig&) const = default;
};

struct RunConfig {
  std::string experiment;  // empty: any subcommand
  std::string out;         // output directory; --out takes precedence
  bool override_guards = false;
  std::uint64_t seed = 20240917;
  std::vector<double> schedule{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12};
  MollifierConfig mollifier;
  FracConfig frac;
  VolterraConfig volterra;
  EvolutionConfig evolution;
  SchrodingerConfig schrodinger;
  SweepConfig sweep;
  bool operator==(const RunConfig&) const = default;
};

/// Thrown for malformed or out-of-domain configuration (exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig parse_config(const std::string& ini_text);
RunConfig load_config(const std::filesystem::path& path);
std::string write_config(const RunConfig& cfg);

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  double runtime = 0.0;
};

struct VerdictReport {
  std::vector<Check> checks;
  bool all_pass() const;
  /// verdict.csv (deterministic) and runtime.csv.
  void write(const std::filesystem::path& dir) const;
};

struct Options {
  std::filesystem::path out = "out";
  unsigned threads = 1;
  bool override_guards = false;
};

VerdictReport cmd_frac_bounds(const RunConfig& cfg, const Options& opt);
VerdictReport cmd_volterra(const RunConfig& cfg, const Options& opt);
VerdictReport cmd_evolution(const RunConfig& cfg, const Options& opt);
VerdictReport cmd_schrodinger(const RunConfig& cfg, const Options& opt);
VerdictReport cmd_sweep(const RunConfig& cfg, const Options& opt);

/// Full command line entry point; returns the process exit code (0 pass, 1 usage, 2 check failure).
int run(int argc, char** argv);

}  // namespace singreg::cli
