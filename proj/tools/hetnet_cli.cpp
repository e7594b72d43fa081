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


#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "hetnet/hetnet.h"

namespace {

struct Options {
  std::string config_path;
  bool full_scale = false;
  std::int64_t seed = -1;
  std::vector<std::string> overrides;
  std::string out;
  std::string checkpoint;
  int verbosity = 2;
};

int report(hn_status s, const char* what) {
  if (s == HN_OK) return 0;
  std::cerr << "error: " << what << ": " << hn_last_error() << "\n";
  return static_cast<int>(s);
}

std::string yaml_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c;
  }
  return q + "\"";
}

// Builds the config: file or defaults, then --seed, --out and --set.
int load(const Options& o, hn_config** cfg) {
  hn_status s;
  if (!o.config_path.empty()) s = hn_config_load(o.config_path.c_str(), cfg);
  else if (o.full_scale) s = hn_config_full_scale(cfg);
  else s = hn_config_default(cfg);
  if (s != HN_OK) return report(s, "config");
  std::vector<std::string> sets;
  if (o.seed >= 0) sets.push_back("seed=" + std::to_string(o.seed));
  if (!o.out.empty()) sets.push_back("output_dir=" + yaml_quote(o.out));
  sets.insert(sets.end(), o.overrides.begin(), o.overrides.end());
  std::vector<const char*> ptrs;
  for (const auto& a : sets) ptrs.push_back(a.c_str());
  s = hn_config_set_many(*cfg, ptrs.data(), ptrs.size());
  if (s != HN_OK) {
    hn_config_free(*cfg);
    *cfg = nullptr;
    return report(s, "--set");
  }
  return 0;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("-c,--config", o.config_path, "YAML experiment config")->check(CLI::ExistingFile);
  sub->add_flag("--full-scale", o.full_scale, "start from the full-size defaults instead of the desk-scale ones");
  sub->add_option("--seed", o.seed, "master seed (overrides the config)")->check(CLI::NonNegativeNumber);
  sub->add_option("--set", o.overrides, "dotted.key=value override, repeatable");
  sub->add_option("-o,--out", o.out, "output directory");
  sub->add_option("-v,--verbosity", o.verbosity, "0 debug .. 3 errors only")->check(CLI::Range(0, 4));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent DDQN user association and backhaul allocation for mmWave HetNets"};
  app.set_version_flag("--version", std::string(hn_version()));
  app.require_subcommand(1);
  Options o;

  auto* train = app.add_subcommand("train", "train MADDQN and evaluate the configured schemes");
  auto* eval = app.add_subcommand("eval", "evaluate the configured schemes, MADDQN from --checkpoint");
  auto* sweep_delta = app.add_subcommand("sweep-delta", "train and evaluate one policy per selfish factor");
  auto* sweep_ues = app.add_subcommand("sweep-ues", "all schemes over the configured UE counts");
  auto* sweep_sbs = app.add_subcommand("sweep-sbs", "all schemes over the configured SBS counts");
  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum on the first evaluation step");
  auto* dump = app.add_subcommand("dump-config", "print the effective config as YAML");
  for (auto* sub : {train, eval, sweep_delta, sweep_ues, sweep_sbs, oracle, dump}) add_common(sub, o);
  eval->add_option("--checkpoint", o.checkpoint, "policy checkpoint for MADDQN")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  hn_set_log_level(o.verbosity);

  hn_config* cfg = nullptr;
  if (int rc = load(o, &cfg)) return rc;
  int rc = 0;

  if (*dump) {
    char* text = nullptr;
    rc = report(hn_config_dump(cfg, &text), "dump-config");
    if (!rc) std::cout << text;
    hn_string_free(text);
  } else if (*train) {
    rc = report(hn_run_experiment(cfg, nullptr, nullptr), "train");
  } else if (*eval) {
    hn_policy* policy = nullptr;
    if (!o.checkpoint.empty()) rc = report(hn_policy_load(o.checkpoint.c_str(), &policy), "checkpoint");
    if (!rc) rc = report(hn_run_experiment(cfg, policy, nullptr), "eval");
    hn_policy_free(policy);
  } else if (*sweep_delta) {
    rc = report(hn_sweep_delta(cfg), "sweep-delta");
  } else if (*sweep_ues) {
    rc = report(hn_sweep_ues(cfg), "sweep-ues");
  } else if (*sweep_sbs) {
    rc = report(hn_sweep_sbs(cfg), "sweep-sbs");
  } else if (*oracle) {
    double best = 0.0;
    std::uint64_t evaluated = 0;
    std::size_t n = 0;
    std::vector<int> assoc(64), blocks(64);
    rc = report(hn_oracle(cfg, &best, assoc.data(), blocks.data(), assoc.size(), &n, &evaluated), "oracle");
    if (!rc) {
      std::printf("{\"best_total_gbps\": %.9f, \"evaluated\": %llu, \"assoc\": [", best / 1e9,
                  static_cast<unsigned long long>(evaluated));
      for (std::size_t i = 0; i < n; ++i) std::printf("%s%d", i ? ", " : "", assoc[i]);
      std::printf("], \"blocks\": [");
      for (std::size_t i = 0; i < n; ++i) std::printf("%s%d", i ? ", " : "", blocks[i]);
      std::printf("]}\n");
    }
  }
  hn_config_free(cfg);
  return rc;
}
