// fclt command-line runner. All functionality lives behind the C API of the
// shared library; this binary only parses arguments, loads the config file,
// forwards overrides, prints the human summary and writes the artifact.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fclt/fclt.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fclt — pre-limit process simulation and rate-bound verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::string out_path;
  std::string format;
  bool seed_set = false, samples_set = false;

  const std::vector<std::string> commands = {"bound", "simulate", "verify", "rate", "stein-check"};
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&seed_set](const std::string&) { seed_set = true; });
    sub->add_option("--samples", samples, "override the config sample count")
        ->each([&samples_set](const std::string&) { samples_set = true; });
    sub->add_option("--out", out_path, "artifact output path");
    sub->add_option("--format", format, "artifact format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  std::string config_json;
  try {
    config_json = read_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  nlohmann::json overrides;
  overrides["command"] = command;
  if (seed_set) overrides["seed"] = seed;
  if (samples_set) overrides["samples"] = samples;
  if (!out_path.empty()) overrides["out"] = out_path;
  if (!format.empty()) overrides["format"] = format;

  char* result_json = nullptr;
  char* error = nullptr;
  const fclt_status status =
      fclt_run(config_json.c_str(), overrides.dump().c_str(), &result_json, &error);
  if (result_json == nullptr) {
    std::cerr << "error: " << (error != nullptr ? error : "unknown failure") << "\n";
    fclt_string_free(error);
    return 2;
  }

  int exit_code = static_cast<int>(status);
  try {
    const nlohmann::json result = nlohmann::json::parse(result_json);
    std::cout << result.at("human").get<std::string>();
    const std::string out = result.at("out").get<std::string>();
    if (!out.empty()) {
      const std::string fmt = result.at("format").get<std::string>();
      const std::string key = fmt == "csv" ? "artifact_csv" : "artifact_json";
      const std::string artifact = result.at(key).get<std::string>();
      std::ofstream file(out, std::ios::binary);
      if (!file) {
        std::cerr << "error: cannot write " << out << "\n";
        exit_code = 2;
      } else {
        file << artifact;
        std::cout << "wrote " << out << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: malformed result: " << e.what() << "\n";
    exit_code = 2;
  }
  fclt_string_free(result_json);
  fclt_string_free(error);
  return exit_code;
}
