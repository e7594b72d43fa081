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
#include <stdexcept>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "env.hpp"
#include "maddqn.hpp"

namespace hetnet {

/// Validation failure; `line` is 1-based, 0 when no position applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

struct TopologyConfig {
  std::size_t n_sbs = 4;
  std::size_t n_ue = 6;
  double radius_m = 100.0;
  std::string file;  // snapshot to load instead of generating
};

struct SweepConfig {
  std::vector<double> deltas{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<std::size_t> ue_counts{4, 5, 6, 7, 8};
  std::vector<int> l_max_values;  // paired with ue_counts; empty: derived from l_max_factor
  double l_max_factor = 1.2;      // l_max = round(factor * L / N), raised to stay feasible
  std::vector<std::size_t> sbs_counts{2, 3, 4, 5, 6};
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string run_id = "run";
  std::string output_dir = "out";
  std::vector<Scheme> schemes{Scheme::Maddqn, Scheme::Hl, Scheme::Sl, Scheme::Da, Scheme::MbsOnly};
  int eval_steps = 1000;
  bool write_checkpoint = true;
  TopologyConfig topology;
  ChannelParams channel;
  RadioParams radio;
  ObservationOptions observation;
  TrainConfig train;
  SweepConfig sweep;

  void validate() const;
  bool has_scheme(Scheme s) const;
};

/// Small deployment sized for a single core.
ExperimentConfig default_config();
/// 30 UEs, 20 SBSs, E = 3000, T = 1000.
ExperimentConfig full_scale_config();

/// Parses YAML. Missing keys keep their defaults, unknown keys are errors.
/// Each override is "dotted.key=value" with a YAML scalar or flow value.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>",
                              const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const std::vector<std::string>& overrides);

std::string dump_config(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Topology from the snapshot file or generated from the seed.
Scenario build_scenario(const ExperimentConfig& cfg);
/// TrainConfig with the experiment seed applied.
TrainConfig train_config(const ExperimentConfig& cfg);

}  // namespace hetnet
