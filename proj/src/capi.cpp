#include "fclt/fclt.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "experiment.hpp"
#include "mc_harness.hpp"

using fclt::ExperimentConfig;
using fclt::FunctionalPtr;
using fclt::ModelSpec;
using fclt::RunResult;

struct fclt_model {
  ModelSpec spec;
};

struct fclt_functional {
  FunctionalPtr fn;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** out_error, const std::string& message) {
  if (out_error != nullptr) *out_error = dup_string(message);
}

}  // namespace

extern "C" {

const char* fclt_version(void) { return "0.1.0"; }

int fclt_effective_threads(void) { return fclt::effective_threads(); }

void fclt_string_free(char* s) { delete[] s; }

fclt_status fclt_model_create(const char* model_json, fclt_model** out_model, char** out_error) {
  if (model_json == nullptr || out_model == nullptr) {
    set_error(out_error, "null argument");
    return FCLT_CONFIG_ERROR;
  }
  try {
    auto* handle = new fclt_model{ModelSpec::from_json(model_json)};
    *out_model = handle;
    return FCLT_OK;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return FCLT_CONFIG_ERROR;
  }
}

void fclt_model_destroy(fclt_model* model) { delete model; }

fclt_status fclt_functional_create(const char* functional_json, fclt_functional** out_functional,
                                   char** out_error) {
  if (functional_json == nullptr || out_functional == nullptr) {
    set_error(out_error, "null argument");
    return FCLT_CONFIG_ERROR;
  }
  try {
    auto* handle = new fclt_functional{fclt::functional_from_json(functional_json)};
    *out_functional = handle;
    return FCLT_OK;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return FCLT_CONFIG_ERROR;
  }
}

void fclt_functional_destroy(fclt_functional* functional) { delete functional; }

fclt_status fclt_bound_report(const fclt_model* model, const fclt_functional* functional,
                              uint64_t seed, uint64_t budget, char** out_json, char** out_error) {
  if (model == nullptr || out_json == nullptr) {
    set_error(out_error, "null argument");
    return FCLT_CONFIG_ERROR;
  }
  try {
    fclt::BoundReport report;
    const fclt::FunctionalSpec* g = functional != nullptr ? functional->fn.get() : nullptr;
    switch (model->spec.kind) {
      case ModelSpec::Kind::scans: {
        const fclt::ScansStats stats = fclt::scans_stats(model->spec.scans);
        report = fclt::scans_bound(model->spec.scans, model->spec.scans_regime, stats, g);
        break;
      }
      case ModelSpec::Kind::iid:
        report = fclt::iid_bound(model->spec.iid.p, model->spec.iid.n, model->spec.iid.sigma,
                                 model->spec.iid.third_abs_moments(),
                                 model->spec.iid.second_abs_moments());
        break;
      case ModelSpec::Kind::ustat: {
        const fclt::UStatProjection proj =
            fclt::ustat_projection(model->spec.ustat, budget, seed);
        report = fclt::ustat_bound(model->spec.ustat.n, proj.sigma_h2.mean, proj.sigma_w2.mean,
                                   proj.e_abs_w3.mean, proj.e_abs_w1.mean);
        break;
      }
    }
    *out_json = dup_string(report.to_json());
    return FCLT_OK;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return FCLT_CONFIG_ERROR;
  }
}

fclt_status fclt_verify_report(const fclt_model* model, const fclt_functional* functional,
                               uint64_t seed, uint64_t samples, char** out_json,
                               char** out_error) {
  if (model == nullptr || functional == nullptr || out_json == nullptr) {
    set_error(out_error, "null argument");
    return FCLT_CONFIG_ERROR;
  }
  try {
    fclt::VerifyOptions options;
    options.seed = seed;
    options.samples = samples;
    fclt::VerifyReport report;
    switch (model->spec.kind) {
      case ModelSpec::Kind::scans:
        report = fclt::verify_scans(model->spec.scans, model->spec.scans_regime, *functional->fn,
                                    options);
        break;
      case ModelSpec::Kind::iid:
        report = fclt::verify_iid(model->spec.iid, *functional->fn, options);
        break;
      case ModelSpec::Kind::ustat:
        report = fclt::verify_ustat(model->spec.ustat, *functional->fn, options);
        break;
    }
    *out_json = dup_string(report.to_json());
    return report.pass ? FCLT_OK : FCLT_VERIFY_FAILED;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return FCLT_CONFIG_ERROR;
  }
}

fclt_status fclt_sample_paths(const fclt_model* model, uint64_t seed, uint64_t count,
                              int refinement, char** out_json, char** out_error) {
  if (model == nullptr || out_json == nullptr) {
    set_error(out_error, "null argument");
    return FCLT_CONFIG_ERROR;
  }
  try {
    nlohmann::json j;
    j["command"] = "simulate";
    j["model"] = nlohmann::json::parse(model->spec.to_json());
    j["seed"] = seed;
    j["samples"] = count;
    j["refinement"] = refinement;
    const RunResult result = fclt::run_experiment(ExperimentConfig::from_json(j.dump()));
    if (result.status == 2) {
      set_error(out_error, result.human);
      return FCLT_CONFIG_ERROR;
    }
    *out_json = dup_string(result.artifact_json);
    return FCLT_OK;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return FCLT_CONFIG_ERROR;
  }
}

fclt_status fclt_run(const char* config_json, const char* overrides_json, char** out_result_json,
                     char** out_error) {
  if (config_json == nullptr || out_result_json == nullptr) {
    set_error(out_error, "null argument");
    return FCLT_CONFIG_ERROR;
  }
  try {
    const RunResult result =
        fclt::run_from_json(config_json, overrides_json == nullptr ? "" : overrides_json);
    nlohmann::json j;
    j["status"] = result.status;
    j["human"] = result.human;
    j["artifact_json"] = result.artifact_json;
    j["artifact_csv"] = result.artifact_csv;
    j["out"] = result.out;
    j["format"] = result.format;
    *out_result_json = dup_string(j.dump());
    if (result.status == 1) return FCLT_VERIFY_FAILED;
    if (result.status == 2) return FCLT_CONFIG_ERROR;
    return FCLT_OK;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return FCLT_CONFIG_ERROR;
  }
}

}  // extern "C"
