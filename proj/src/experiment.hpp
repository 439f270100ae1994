#ifndef FCLT_EXPERIMENT_HPP
#define FCLT_EXPERIMENT_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "functional.hpp"
#include "scans_model.hpp"
#include "ustat_model.hpp"
#include "verify.hpp"

namespace fclt {

struct ModelSpec {
  enum class Kind { scans, ustat, iid };
  Kind kind = Kind::scans;
  ScansModel scans;
  ScansRegime scans_regime = ScansRegime::block_average;
  UStatModel ustat;
  IidModel iid;

  static ModelSpec from_json(const std::string& text);
  std::string to_json() const;
};

// Functional descriptors: {"type":"lr"|"bump"|"cylinder", ...}.
FunctionalPtr functional_from_json(const std::string& text);

struct ExperimentConfig {
  std::string command;  // bound | simulate | verify | rate | stein-check
  std::optional<ModelSpec> model;
  std::optional<std::string> functional_json;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t seed = 1;
  std::uint64_t samples = 20000;
  std::uint64_t oracle_budget = 100000;
  int refinement = kDefaultRefinement;
  double slope_lo = -0.55;
  double slope_hi = -0.35;
  std::string out;
  std::string format = "json";  // csv | json

  static ExperimentConfig from_json(const std::string& text);
};

struct RunResult {
  int status = 0;  // 0 ok, 1 verification failure, 2 config error
  std::string human;
  std::string artifact_json;
  std::string artifact_csv;
  std::string out;     // requested output path ("" = none)
  std::string format;  // requested artifact format
};

// Executes one experiment; never throws (errors land in status/human).
RunResult run_experiment(const ExperimentConfig& config);

// Parses config + overrides and runs. overrides_json may carry seed,
// samples, out, format.
RunResult run_from_json(const std::string& config_json, const std::string& overrides_json);

}  // namespace fclt

#endif
