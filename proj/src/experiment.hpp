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


#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "metrics.hpp"

namespace hetnet {

inline constexpr const char* kVersion = "hetnet 1.0.0";

struct OracleResult {
  JointDecision best;
  double best_total_bps = 0.0;
  std::uint64_t evaluated = 0;
  std::uint64_t feasible = 0;
};

inline constexpr std::uint64_t kOracleLimit = 10'000'000;

/// Exhaustive search over ((l_max+1) S)^N joint actions on one realization.
/// Throws std::length_error above kOracleLimit.
OracleResult brute_force_oracle(const Scenario& sc, const ChannelRealization& real);

/// The first realization of the evaluation trace of `seed`.
ChannelRealization first_eval_realization(const Scenario& sc, std::uint64_t seed);

struct RunResult {
  std::vector<EvalMetrics> metrics;  // one per scheme, config order
  std::optional<TrainLog> log;
  std::optional<PolicySet> policy;
  std::vector<std::string> files;
};

/// Trains MADDQN if listed (unless `policy` is given), evaluates every
/// scheme on the shared trace, and writes CSVs when `write` is set.
RunResult run_experiment(const ExperimentConfig& cfg, bool write = true, const PolicySet* policy = nullptr);

struct DeltaPoint {
  double delta = 0.0;
  EvalMetrics metrics;
  TrainLog log;
};
std::vector<DeltaPoint> delta_sweep(const ExperimentConfig& cfg, bool write = true);

struct SweepPoint {
  std::size_t n_ue = 0;
  std::size_t n_sbs = 0;
  int l_max = 0;
  std::vector<EvalMetrics> metrics;
};
std::vector<SweepPoint> ue_sweep(const ExperimentConfig& cfg, bool write = true);
std::vector<SweepPoint> sbs_sweep(const ExperimentConfig& cfg, bool write = true);

/// l_max used for n_ue UEs in a sweep.
int sweep_l_max(const ExperimentConfig& cfg, std::size_t index, std::size_t n_ue);

// CSV writers. Numbers use fixed precision so equal runs give equal bytes.
std::string convergence_csv(const TrainLog& log);
std::string steps_csv(const std::string& run_id, const std::vector<EvalMetrics>& metrics);
std::string trace_csv(const std::string& run_id, const std::vector<EvalMetrics>& metrics);
std::string per_sbs_csv(const std::string& run_id, const std::vector<EvalMetrics>& metrics);
std::string summary_csv(const std::string& run_id, std::uint64_t cfg_hash, const std::vector<EvalMetrics>& metrics);

std::string hex64(std::uint64_t v);

}  // namespace hetnet
