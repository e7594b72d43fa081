// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "hetnet/hetnet.h"

#include <yaml-cpp/exceptions.h>

#include <cstring>
#include <filesystem>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "experiment.hpp"
#include "log.hpp"

struct hn_config {
  hetnet::ExperimentConfig cfg;
};

struct hn_policy {
  hetnet::PolicySet policy;
};

namespace {

thread_local std::string g_last_error;

hn_status fail(hn_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename F>
hn_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return HN_OK;
  } catch (const hetnet::ConfigError& e) {
    return fail(HN_ERR_CONFIG, e.what());
  } catch (const YAML::Exception& e) {
    return fail(HN_ERR_CONFIG, e.what());
  } catch (const std::length_error& e) {
    return fail(HN_ERR_TOO_LARGE, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(HN_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(HN_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(HN_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(HN_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(HN_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(HN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HN_ERR_INTERNAL, "unknown error");
  }
}

#define HN_REQUIRE(ptr)                                                          \
  do {                                                                           \
    if (!(ptr)) return fail(HN_ERR_INVALID_ARGUMENT, #ptr " must not be null"); \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hn_status new_config(hetnet::ExperimentConfig cfg, hn_config** out) {
  *out = new hn_config{std::move(cfg)};
  return HN_OK;
}

}  // namespace

extern "C" {

const char* hn_version(void) { return hetnet::kVersion; }
const char* hn_last_error(void) { return g_last_error.c_str(); }

void hn_set_log_level(int level) {
  if (level < 0) level = 0;
  if (level > 4) level = 4;
  hetnet::set_log_level(static_cast<hetnet::LogLevel>(level));
}

void hn_string_free(char* s) { std::free(s); }

hn_status hn_config_default(hn_config** out) {
  HN_REQUIRE(out);
  return guarded([&] { new_config(hetnet::default_config(), out); });
}

hn_status hn_config_full_scale(hn_config** out) {
  HN_REQUIRE(out);
  return guarded([&] { new_config(hetnet::full_scale_config(), out); });
}

hn_status hn_config_load(const char* path, hn_config** out) {
  HN_REQUIRE(path);
  HN_REQUIRE(out);
  return guarded([&] { new_config(hetnet::load_config(path), out); });
}

hn_status hn_config_parse(const char* yaml, hn_config** out) {
  HN_REQUIRE(yaml);
  HN_REQUIRE(out);
  return guarded([&] { new_config(hetnet::parse_config(yaml), out); });
}

hn_status hn_config_set(hn_config* cfg, const char* assignment) {
  HN_REQUIRE(cfg);
  HN_REQUIRE(assignment);
  return guarded([&] { cfg->cfg = hetnet::apply_overrides(cfg->cfg, {assignment}); });
}

hn_status hn_config_set_many(hn_config* cfg, const char* const* assignments, size_t count) {
  HN_REQUIRE(cfg);
  HN_REQUIRE(assignments || count == 0);
  return guarded([&] {
    std::vector<std::string> list;
    for (size_t k = 0; k < count; ++k) {
      if (!assignments[k]) throw std::invalid_argument("null assignment");
      list.emplace_back(assignments[k]);
    }
    cfg->cfg = hetnet::apply_overrides(cfg->cfg, list);
  });
}

hn_status hn_config_dump(const hn_config* cfg, char** out_yaml) {
  HN_REQUIRE(cfg);
  HN_REQUIRE(out_yaml);
  return guarded([&] { *out_yaml = copy_string(hetnet::dump_config(cfg->cfg)); });
}

hn_status hn_config_hash(const hn_config* cfg, uint64_t* out) {
  HN_REQUIRE(cfg);
  HN_REQUIRE(out);
  return guarded([&] { *out = hetnet::config_hash(cfg->cfg); });
}

void hn_config_free(hn_config* cfg) { delete cfg; }

hn_status hn_policy_load(const char* path, hn_policy** out) {
  HN_REQUIRE(path);
  HN_REQUIRE(out);
  return guarded([&] { *out = new hn_policy{hetnet::load_policy(path)}; });
}

hn_status hn_policy_save(const hn_policy* policy, const char* path) {
  HN_REQUIRE(policy);
  HN_REQUIRE(path);
  return guarded([&] { hetnet::save_policy(policy->policy, path); });
}

size_t hn_policy_agents(const hn_policy* policy) { return policy ? policy->policy.networks.size() : 0; }

void hn_policy_free(hn_policy* policy) { delete policy; }

hn_status hn_train(const hn_config* cfg, hn_policy** out) {
  HN_REQUIRE(cfg);
  HN_REQUIRE(out);
  return guarded([&] {
    cfg->cfg.validate();
    const hetnet::Scenario sc = hetnet::build_scenario(cfg->cfg);
    *out = new hn_policy{hetnet::train(sc, hetnet::train_config(cfg->cfg)).policy};
  });
}

hn_status hn_run_experiment(const hn_config* cfg, const hn_policy* policy, hn_policy** out_policy) {
  HN_REQUIRE(cfg);
  return guarded([&] {
    hetnet::RunResult r = hetnet::run_experiment(cfg->cfg, true, policy ? &policy->policy : nullptr);
    if (out_policy) *out_policy = r.policy ? new hn_policy{std::move(*r.policy)} : nullptr;
  });
}

hn_status hn_evaluate_scheme(const hn_config* cfg, const hn_policy* policy, const char* scheme,
                             hn_scheme_summary* out) {
  HN_REQUIRE(cfg);
  HN_REQUIRE(scheme);
  HN_REQUIRE(out);
  return guarded([&] {
    const hetnet::Scheme s = hetnet::parse_scheme(scheme);
    const hetnet::Scenario sc = hetnet::build_scenario(cfg->cfg);
    hetnet::EvalMetrics m;
    if (s == hetnet::Scheme::Maddqn) {
      if (!policy) throw std::invalid_argument("scheme maddqn needs a policy");
      m = hetnet::evaluate(policy->policy, sc, cfg->cfg.eval_steps, cfg->cfg.seed);
    } else {
      m = hetnet::evaluate_baseline(s, sc, cfg->cfg.eval_steps, cfg->cfg.seed);
    }
    out->mean_total_gbps = m.mean_total_bps / 1e9;
    out->mean_effective_gbps = m.mean_effective_bps / 1e9;
    out->effective_ratio = m.effective_ratio();
    out->mean_beta_sum = m.mean_beta_sum;
    out->effective_steps = m.effective_count;
    out->n_steps = static_cast<int>(m.steps.size());
    out->trace_hash = m.trace_hash;
  });
}

hn_status hn_sweep_delta(const hn_config* cfg) {
  HN_REQUIRE(cfg);
  return guarded([&] { hetnet::delta_sweep(cfg->cfg); });
}

hn_status hn_sweep_ues(const hn_config* cfg) {
  HN_REQUIRE(cfg);
  return guarded([&] { hetnet::ue_sweep(cfg->cfg); });
}

hn_status hn_sweep_sbs(const hn_config* cfg) {
  HN_REQUIRE(cfg);
  return guarded([&] { hetnet::sbs_sweep(cfg->cfg); });
}

hn_status hn_oracle(const hn_config* cfg, double* best_total_bps, int* assoc, int* blocks, size_t capacity,
                    size_t* n_ue, uint64_t* evaluated) {
  HN_REQUIRE(cfg);
  HN_REQUIRE(best_total_bps);
  return guarded([&] {
    const hetnet::Scenario sc = hetnet::build_scenario(cfg->cfg);
    const auto real = hetnet::first_eval_realization(sc, cfg->cfg.seed);
    const hetnet::OracleResult r = hetnet::brute_force_oracle(sc, real);
    *best_total_bps = r.best_total_bps;
    if (evaluated) *evaluated = r.evaluated;
    const std::size_t n = r.best.assoc.size();
    if (n_ue) *n_ue = n;
    if ((assoc || blocks) && capacity < n)
      throw std::invalid_argument("output capacity " + std::to_string(capacity) + " is below " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (assoc) assoc[i] = r.best.assoc[i];
      if (blocks) blocks[i] = r.best.blocks[i];
    }
  });
}

hn_status hn_link_state_probs(double distance_m, double a_los, double a_out, double b_out, double out[3]) {
  HN_REQUIRE(out);
  return guarded([&] {
    hetnet::BlockageParams bp{a_los, a_out, b_out};
    bp.validate();
    const auto p = hetnet::link_state_probs(distance_m, bp);
    out[0] = p.los;
    out[1] = p.nlos;
    out[2] = p.outage;
  });
}

hn_status hn_free_space_db(double carrier_hz, double ref_distance_m, double* out) {
  HN_REQUIRE(out);
  return guarded([&] {
    hetnet::BandParams band;
    band.carrier_hz = carrier_hz;
    band.ref_distance_m = ref_distance_m;
    band.validate();
    *out = hetnet::free_space_reference_db(band);
  });
}

}  // extern "C"
