#include "ryflow/config.hpp"
#include "ryflow/runner.hpp"
#include "ryflow/tensor.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ryflow::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_artifacts(const std::filesystem::path& dir,
                     const ryflow::RunResult& result) {
  for (const auto& [name, payload] : result.artifacts) {
    const std::filesystem::path target = dir / name;
    if (target.has_parent_path())
      std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write artifact " + target.string());
    out << payload;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerics laboratory for Ricci-Yamabe maps of evolving metrics"};
  app.set_version_flag("--version", "ryflow 1.0.0");
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  app.add_option("config", config_path, "run configuration file")->required();
  app.add_option("--set", overrides, "override a config key, section.key=value")
      ->type_name("KEY=VALUE");
  app.add_option("--out", out_dir, "override [run].output_dir");
  CLI11_PARSE(app, argc, argv);

  try {
    ryflow::RunConfig config = ryflow::parse_config(read_file(config_path));
    for (const auto& ov : overrides) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos)
        throw ryflow::ConfigError("override '" + ov +
                                  "' must be section.key=value");
      ryflow::apply_override(config, ov.substr(0, eq), ov.substr(eq + 1));
    }
    if (!out_dir.empty()) config.output_dir = out_dir;
    ryflow::validate_config(config);

    const ryflow::RunResult result = ryflow::execute(config);
    write_artifacts(config.output_dir, result);
    std::fputs(result.report.dump().c_str(), stdout);
    return result.exit_code;
  } catch (const ryflow::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ryflow::PreconditionError& e) {
    std::fprintf(stderr, "precondition error: %s\n", e.what());
    return 2;
  } catch (const ryflow::EvaluationDomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return 2;
  } catch (const ryflow::DegenerateMetricError& e) {
    std::fprintf(stderr, "degenerate metric: %s\n", e.what());
    return 2;
  } catch (const ryflow::PositivityError& e) {
    std::fprintf(stderr, "positivity error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime abort: %s\n", e.what());
    return 3;
  }
}
