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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "env.hpp"
#include "metrics.hpp"
#include "qnet.hpp"
#include "replay.hpp"

namespace hetnet {

struct TrainConfig {
  int episodes = 3000;  // E
  int steps = 1000;     // T
  double epsilon_start = 1.0;
  double epsilon_end = 0.002;
  double epsilon_decay_fraction = 0.8;  // epsilon reaches its floor after this share of E
  double gamma = 0.9;
  std::size_t minibatch = 1000;
  std::size_t replay_capacity = 150000;
  int target_sync_episodes = 10;  // C
  int updates_per_episode = 1;
  std::vector<int> hidden{400, 350, 300};
  RmsPropConfig optimizer;
  double delta = 0.2;
  std::uint64_t seed = 1;
  int workers = 1;
  std::optional<double> fixed_epsilon;  // overrides the schedule when set

  void validate() const;
};

/// Linear decay from epsilon_start to epsilon_end over the first
/// epsilon_decay_fraction * E episodes, flat afterwards.
double epsilon_schedule(int episode, const TrainConfig& cfg);

struct TrainLog {
  std::vector<double> mean_throughput_bps;  // per episode, ineffective steps count as 0
  std::vector<int> effective_steps;
  std::vector<int> random_steps;
  std::vector<double> epsilon;
  std::vector<std::vector<double>> loss;  // [episode][agent], NaN before learning starts
};

struct StepEvent {
  int episode = 0;
  int step = 0;
  bool random = false;
  std::span<const int> actions;
  const StepOutcome* outcome = nullptr;
};
using StepObserver = std::function<void(const StepEvent&)>;

struct Agent {
  QNetwork online;
  QNetwork target;
  RmsProp optimizer;
  ReplayMemory memory;
  Rng rng;
};

/// Greedy action of one network.
int act_greedy(const QNetwork& net, std::span<const double> obs);

class Trainer {
 public:
  Trainer(Scenario scenario, TrainConfig cfg);

  /// Runs one episode: T interaction steps, then one learning phase.
  void run_episode(const StepObserver& observer = {});
  void run(const StepObserver& observer = {});

  int episodes_done() const { return episode_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const TrainLog& log() const { return log_; }
  const TrainConfig& config() const { return cfg_; }
  const Environment& environment() const { return env_; }

  /// Online networks with the fingerprint of the last training episode.
  PolicySet policy() const;

 private:
  void learn();

  TrainConfig cfg_;
  Environment env_;
  Rng coordinator_;
  std::vector<Agent> agents_;
  TrainLog log_;
  int episode_ = 0;
};

struct TrainResult {
  PolicySet policy;
  TrainLog log;
};

TrainResult train(const Scenario& scenario, const TrainConfig& cfg, const StepObserver& observer = {});

/// Greedy rollout of the policies on the evaluation channel trace of `seed`.
EvalMetrics evaluate(const PolicySet& policy, const Scenario& scenario, int n_steps, std::uint64_t seed);

StepRecord make_step_record(int step, const ThroughputReport& report, bool effective, std::uint64_t state_hash);

}  // namespace hetnet
