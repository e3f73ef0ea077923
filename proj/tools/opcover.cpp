// opcover <command> --config <path> [--seed N] [--out <path>] [--format json|csv]
//
// Exit codes: 0 success, 2 schema error (JSON on stderr), 3 numeric failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "opcover/harness.hpp"

namespace {

int schema_error(const std::string& path, const std::string& message) {
  std::cerr << opcover::canonical_dump({{"error", "schema"}, {"path", path}, {"message", message}}) << "\n";
  return 2;
}

int numeric_error(const std::string& kind, const std::string& message) {
  std::cerr << opcover::canonical_dump({{"error", "numeric"}, {"kind", kind}, {"message", message}}) << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  using opcover::json;
  CLI::App app{"Operator covering and identification-capacity experiments"};
  std::string command, config_path, out_path, format, sweep_axis, sweep_values;
  std::uint64_t seed = 0;
  std::vector<std::string> param_overrides;
  unsigned threads = 0;
  bool no_timing = false;

  app.add_option("command", command, "Command to run")->required();
  app.add_option("--config", config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--out", out_path, "Output file (default: standard output)");
  app.add_option("--format", format, "json or csv");
  app.add_option("--param", param_overrides, "Override a param: key=<json value>");
  app.add_option("--sweep-axis", sweep_axis, "Param to sweep");
  app.add_option("--sweep-values", sweep_values, "JSON array of sweep values");
  app.add_option("--threads", threads, "Worker cap (default: OPCOVER_THREADS, 0 = auto)");
  app.add_flag("--no-timing", no_timing, "Write wall_time_ms = 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return schema_error("", e.what());
  }

  try {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) return schema_error("", "cannot read config file " + config_path);
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        return schema_error("", std::string("invalid JSON: ") + e.what());
      }
      if (!j.is_object()) return schema_error("", "config must be a JSON object");
    }
    if (j.contains("command") && j["command"] != command)
      return schema_error("/command", "config command does not match the command line");
    j["command"] = command;
    if (*seed_opt) j["seed"] = seed;
    if (!out_path.empty()) j["out"] = out_path;
    if (!format.empty()) j["format"] = format;
    for (const auto& kv : param_overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) return schema_error("/params", "--param expects key=value");
      json value;
      try {
        value = json::parse(kv.substr(eq + 1));
      } catch (const json::parse_error&) {
        value = kv.substr(eq + 1);
      }
      j["params"][kv.substr(0, eq)] = value;
    }
    if (!sweep_axis.empty()) {
      json values;
      try {
        values = json::parse(sweep_values.empty() ? "[]" : sweep_values);
      } catch (const json::parse_error& e) {
        return schema_error("/sweep/values", e.what());
      }
      j["sweep"] = {{"axis", sweep_axis}, {"values", values}};
    }

    const auto config = opcover::parse_config(j);
    const auto out = opcover::render(config, threads, !no_timing);
    if (config.output_path.empty()) {
      std::cout << out.text;
    } else {
      std::ofstream f(config.output_path, std::ios::binary);
      if (!f) return numeric_error("io", "cannot write " + config.output_path);
      f << out.text;
    }
    return out.any_numeric_failure ? 3 : 0;
  } catch (const opcover::SchemaError& e) {
    return schema_error(e.path(), e.what());
  } catch (const opcover::NumericFailure& e) {
    return numeric_error(e.kind(), e.what());
  } catch (const opcover::Error& e) {
    return numeric_error(opcover::to_string(e.kind()), e.what());
  }
}
