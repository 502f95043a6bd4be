#include "ryflow/config.hpp"

#include "ryflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace ryflow {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& raw, const std::string& where,
                 const std::string& key) {
  const std::string v = trim(raw);
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out))
    throw ConfigError(where + ": " + key + " expects a finite number, got '" + v + "'");
  return out;
}

long to_long(const std::string& raw, const std::string& where,
             const std::string& key) {
  const std::string v = trim(raw);
  char* end = nullptr;
  const long out = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size())
    throw ConfigError(where + ": " + key + " expects an integer, got '" + v + "'");
  return out;
}

int to_int(const std::string& raw, const std::string& where, const std::string& key) {
  return static_cast<int>(to_long(raw, where, key));
}

bool to_bool(const std::string& raw, const std::string& where,
             const std::string& key) {
  const std::string v = trim(raw);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(where + ": " + key + " expects true or false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& raw, const std::string& where,
                               const std::string& key) {
  std::vector<double> out;
  std::string::size_type pos = 0;
  while (pos <= raw.size()) {
    const auto comma = raw.find(',', pos);
    const std::string piece =
        raw.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(to_double(piece, where, key));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void apply_key(RunConfig& c, const std::string& section, const std::string& key,
               const std::string& value, const std::string& where) {
  const std::string tag = "[" + section + "]." + key;
  if (section == "run") {
    if (key == "command") c.command = trim(value);
    else if (key == "output_dir") c.output_dir = trim(value);
    else throw ConfigError(where + ": unknown key '" + key + "' in [run]");
  } else if (section == "flow") {
    if (key == "kind") c.flow_kind = trim(value);
    else if (key == "potential") c.potential = trim(value);
    else if (key == "rate") c.rate = to_double(value, where, tag);
    else if (key == "steady") c.steady = to_bool(value, where, tag);
    else if (key == "warp_k") c.warp_k = to_double(value, where, tag);
    else if (key == "dim") c.dim = to_int(value, where, tag);
    else if (key == "base") c.base = trim(value);
    else if (key == "amp") c.amp = to_double(value, where, tag);
    else throw ConfigError(where + ": unknown key '" + key + "' in [flow]");
  } else if (section == "params") {
    if (key == "alpha") c.alpha = to_double(value, where, tag);
    else if (key == "beta") c.beta = to_double(value, where, tag);
    else throw ConfigError(where + ": unknown key '" + key + "' in [params]");
  } else if (section == "eval") {
    if (key == "t") c.t = to_double(value, where, tag);
    else if (key == "point") c.point = to_doubles(value, where, tag);
    else if (key == "step") c.step = to_double(value, where, tag);
    else if (key == "order") c.order = to_int(value, where, tag);
    else if (key == "richardson") c.richardson = to_bool(value, where, tag);
    else if (key == "tol") c.tol = to_double(value, where, tag);
    else throw ConfigError(where + ": unknown key '" + key + "' in [eval]");
  } else if (section == "grid") {
    if (key == "chart") c.chart = trim(value);
    else if (key == "nx") c.nx = to_int(value, where, tag);
    else if (key == "ny") c.ny = to_int(value, where, tag);
    else if (key == "o1") c.o1 = to_double(value, where, tag);
    else if (key == "o2") c.o2 = to_double(value, where, tag);
    else if (key == "d1") c.d1 = to_double(value, where, tag);
    else if (key == "d2") c.d2 = to_double(value, where, tag);
    else if (key == "bc") c.bc = trim(value);
    else if (key == "initial") c.initial = trim(value);
    else throw ConfigError(where + ": unknown key '" + key + "' in [grid]");
  } else if (section == "solver") {
    if (key == "scheme") c.scheme = trim(value);
    else if (key == "dt") c.dt = to_double(value, where, tag);
    else if (key == "steps") c.steps = to_long(value, where, tag);
    else if (key == "snapshot_stride") c.snapshot_stride = to_long(value, where, tag);
    else if (key == "cfl_guard") c.cfl_guard = to_bool(value, where, tag);
    else throw ConfigError(where + ": unknown key '" + key + "' in [solver]");
  } else if (section == "probes") {
    if (key == "probe") {
      const auto vals = to_doubles(value, where, tag);
      if (vals.size() != 3)
        throw ConfigError(where + ": probe expects t,coord1,coord2");
      c.probes.push_back({vals[0], vals[1], vals[2]});
    } else {
      throw ConfigError(where + ": unknown key '" + key + "' in [probes]");
    }
  } else {
    throw ConfigError(where + ": unknown section [" + section + "]");
  }
}

void check_choice(const std::string& value, const std::set<std::string>& allowed,
                  const std::string& key) {
  if (allowed.count(value)) return;
  std::string opts;
  for (const auto& a : allowed) opts += (opts.empty() ? "" : "|") + a;
  throw ConfigError("config error: " + key + " must be one of " + opts +
                    ", got '" + value + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::string section;
  int lineno = 0;
  std::string::size_type pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string line =
        text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    ++lineno;
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;

    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> sections{
          "run", "flow", "params", "eval", "grid", "solver", "probes"};
      if (!sections.count(section))
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (section.empty())
      throw ConfigError(where + ": key '" + key + "' appears before any [section]");
    apply_key(c, section, key, value, where);
  }
  return c;
}

void apply_override(RunConfig& config, const std::string& dotted_key,
                    const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size())
    throw ConfigError("override '" + dotted_key + "' must be section.key");
  apply_key(config, trim(dotted_key.substr(0, dot)),
            trim(dotted_key.substr(dot + 1)), value,
            "override " + dotted_key);
}

void validate_config(const RunConfig& c) {
  check_choice(c.command,
               {"curvature", "ry-eval", "classify", "verify", "flow-run", "residuals"},
               "[run].command");
  check_choice(c.flow_kind,
               {"cigar", "conformal", "cone", "convex", "poincare", "warped",
                "warped-general"},
               "[flow].kind");
  check_choice(c.potential, {"exp", "one", "power"}, "[flow].potential");
  check_choice(c.base, {"flat", "hyperbolic", "round"}, "[flow].base");
  check_choice(c.chart, {"cartesian", "parabolic"}, "[grid].chart");
  check_choice(c.bc, {"exact", "periodic"}, "[grid].bc");
  check_choice(c.initial, {"cigar", "sine", "constant"}, "[grid].initial");
  check_choice(c.scheme, {"euler", "rk4", "semi-implicit"}, "[solver].scheme");

  if (c.dim < 2) throw ConfigError("config error: [flow].dim must be at least 2");
  if (c.flow_kind == "poincare" && c.dim != static_cast<int>(c.point.size()))
    throw ConfigError("config error: [eval].point needs [flow].dim coordinates");
  if (c.flow_kind != "poincare" && c.point.size() != 2)
    throw ConfigError("config error: [eval].point needs 2 coordinates");
  if (c.amp < 0.0) throw ConfigError("config error: [flow].amp must be nonnegative");

  if (!(c.step > 0.0)) throw ConfigError("config error: [eval].step must be positive");
  if (c.order != 2 && c.order != 4)
    throw ConfigError("config error: [eval].order must be 2 or 4");
  if (!(c.tol > 0.0)) throw ConfigError("config error: [eval].tol must be positive");

  if (c.nx < 5 || c.ny < 5)
    throw ConfigError("config error: [grid].nx and [grid].ny must be at least 5");
  if (!(c.d1 > 0.0) || !(c.d2 > 0.0))
    throw ConfigError("config error: [grid].d1 and [grid].d2 must be positive");
  if (c.bc == "exact" && c.initial != "cigar")
    throw ConfigError("config error: [grid].bc = exact needs [grid].initial = cigar");

  if (!(c.dt > 0.0)) throw ConfigError("config error: [solver].dt must be positive");
  if (c.steps < 0) throw ConfigError("config error: [solver].steps must be nonnegative");
  if (c.snapshot_stride < 1)
    throw ConfigError("config error: [solver].snapshot_stride must be at least 1");

  for (const auto& pr : c.probes)
    for (double v : pr)
      if (!std::isfinite(v))
        throw ConfigError("config error: [probes].probe values must be finite");
}

std::string render_config(const RunConfig& c) {
  std::string out;
  const auto kv = [&](const char* key, const std::string& v) {
    out += key;
    out += " = ";
    out += v;
    out += '\n';
  };
  const auto kd = [&](const char* key, double v) { kv(key, format_double(v)); };
  const auto ki = [&](const char* key, long v) { kv(key, std::to_string(v)); };
  const auto kb = [&](const char* key, bool v) { kv(key, v ? "true" : "false"); };

  out += "[run]\n";
  kv("command", c.command);
  kv("output_dir", c.output_dir);
  out += "\n[flow]\n";
  kv("kind", c.flow_kind);
  kv("potential", c.potential);
  kd("rate", c.rate);
  kb("steady", c.steady);
  kd("warp_k", c.warp_k);
  ki("dim", c.dim);
  kv("base", c.base);
  kd("amp", c.amp);
  out += "\n[params]\n";
  kd("alpha", c.alpha);
  kd("beta", c.beta);
  out += "\n[eval]\n";
  kd("t", c.t);
  std::string pt;
  for (std::size_t i = 0; i < c.point.size(); ++i)
    pt += (i ? "," : "") + format_double(c.point[i]);
  kv("point", pt);
  kd("step", c.step);
  ki("order", c.order);
  kb("richardson", c.richardson);
  kd("tol", c.tol);
  out += "\n[grid]\n";
  kv("chart", c.chart);
  ki("nx", c.nx);
  ki("ny", c.ny);
  kd("o1", c.o1);
  kd("o2", c.o2);
  kd("d1", c.d1);
  kd("d2", c.d2);
  kv("bc", c.bc);
  kv("initial", c.initial);
  out += "\n[solver]\n";
  kv("scheme", c.scheme);
  kd("dt", c.dt);
  ki("steps", c.steps);
  ki("snapshot_stride", c.snapshot_stride);
  kb("cfl_guard", c.cfl_guard);
  out += "\n[probes]\n";
  for (const auto& pr : c.probes)
    kv("probe", format_double(pr[0]) + "," + format_double(pr[1]) + "," +
                    format_double(pr[2]));
  return out;
}

}  // namespace ryflow
