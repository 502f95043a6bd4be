#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace ryflow {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One run of the tool: a command plus everything it needs. Defaults describe
/// a steady cigar verification run.
struct RunConfig {
  // [run]
  std::string command = "verify";
  std::string output_dir = "out";

  // [flow]
  std::string flow_kind = "cigar";   // cigar|conformal|cone|convex|poincare|warped|warped-general
  std::string potential = "exp";     // exp|one|power
  double rate = 4.0;                 // exponent scale of the potential
  bool steady = false;               // cigar only: potential making the map vanish
  double warp_k = 1.0;
  int dim = 2;                       // poincare dimension
  std::string base = "flat";         // conformal/cone base: flat|hyperbolic|round
  double amp = 0.5;                  // convex profile amplitude

  // [params]
  double alpha = 1.0;
  double beta = 0.0;

  // [eval]
  double t = 0.0;
  std::vector<double> point{0.3, 0.4};
  double step = 0.01;  // finest rung of verification ladders; identity checks
                       // re-difference derived quantities, so steps much below
                       // this drown the signal in rounding noise
  int order = 2;
  bool richardson = true;
  double tol = 1e-8;

  // [grid]
  std::string chart = "cartesian";   // cartesian|parabolic
  int nx = 41, ny = 41;
  double o1 = -2.0, o2 = -2.0;
  double d1 = 0.1, d2 = 0.1;
  std::string bc = "exact";          // exact|periodic
  std::string initial = "cigar";     // cigar|sine|constant

  // [solver]
  std::string scheme = "rk4";        // euler|rk4|semi-implicit
  double dt = 2e-4;
  long steps = 100;
  long snapshot_stride = 10;
  bool cfl_guard = true;

  // [probes], repeatable probe = t,coord1,coord2
  std::vector<std::array<double, 3>> probes;

  bool operator==(const RunConfig&) const = default;
};

/// Parses the line-oriented `[section]` / `key = value` format; # starts a
/// comment. Unknown sections or keys are rejected with their line number.
RunConfig parse_config(const std::string& text);

/// Applies one `section.key=value` override, as from a command-line flag.
void apply_override(RunConfig& config, const std::string& dotted_key,
                    const std::string& value);

/// Semantic checks beyond syntax; throws ConfigError naming the key.
void validate_config(const RunConfig& config);

/// Canonical full rendering; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

}  // namespace ryflow
