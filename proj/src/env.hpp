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
#include <optional>
#include <span>
#include <vector>

#include "radio.hpp"
#include "realization.hpp"
#include "topology.hpp"

namespace hetnet {

struct ObservationOptions {
  double rate_scale_bps = 10e9;     // rates are divided by this before entering the Q-network
  bool normalize_episode = true;    // e / E instead of raw e
};

/// Everything that defines one deployment to train or evaluate on.
struct Scenario {
  Topology topology;
  ChannelParams channel;
  RadioParams radio;
  ObservationOptions observation;

  std::size_t n_sbs() const { return topology.n_sbs(); }
  std::size_t n_ue() const { return topology.n_ue(); }
  void validate() const;
};

/// State of one agent: previous backhaul observation and rates, its current
/// link states to every SBS, and the (episode, epsilon) fingerprint.
struct AgentObservation {
  double beta_prev = 0.0;
  double total_rate_prev = 0.0;  // bit/s
  std::vector<double> link_states;
  double own_rate_prev = 0.0;  // bit/s
  double episode = 0.0;        // already normalized when the option is on
  double epsilon = 0.0;

  /// Flattened network input of length S + 5.
  std::vector<double> to_vector(const ObservationOptions& opt) const;
};

inline std::size_t observation_size(std::size_t n_sbs) { return n_sbs + 5; }

struct Action {
  int sbs = 0;
  int blocks = 0;

  friend bool operator==(const Action&, const Action&) = default;
};

/// Mixed-radix map between (sbs, blocks) and a flat index in [0, (l_max+1) S).
class ActionCodec {
 public:
  ActionCodec(std::size_t n_sbs, int l_max);

  std::size_t size() const { return n_sbs_ * static_cast<std::size_t>(l_max_ + 1); }
  Action decode(int index) const;
  int encode(Action a) const;

 private:
  std::size_t n_sbs_;
  int l_max_;
};

/// Uniform sampler over compositions of a total into n parts, each in [0, cap].
class CompositionSampler {
 public:
  CompositionSampler(std::size_t parts, int total, int cap);

  std::vector<int> sample(Rng& rng) const;
  /// Number of compositions (as a double; exact below 2^53).
  double count() const { return table_[parts_][total_]; }

 private:
  std::size_t parts_;
  int total_;
  int cap_;
  std::vector<std::vector<double>> table_;  // table_[k][s]: ways for k parts to sum to s
};

struct StepOutcome {
  std::vector<double> rewards;  // Gbit/s
  std::vector<AgentObservation> next_obs;
  ThroughputReport report;
  bool effective = false;
  double realized_total = 0.0;         // bit/s, the R_t fed back to agents
  std::vector<double> realized_rates;  // bit/s per UE
  double beta_observation = 0.0;
  std::uint64_t state_hash = 0;  // link states the decision was evaluated under
};

JointDecision decode_joint(const ActionCodec& codec, std::span<const int> joint_action);

/// Pure step: evaluate on `current`, reward, and observe under `next`.
StepOutcome compute_step(const Scenario& sc, const ActionCodec& codec, std::span<const int> joint_action,
                         const ChannelRealization& current, const ChannelRealization& next, double delta,
                         double episode_fingerprint, double epsilon);

/// Observations with zero rates under the given realization.
std::vector<AgentObservation> initial_observations(const Scenario& sc, const ChannelRealization& real,
                                                   double episode_fingerprint, double epsilon);

class Environment {
 public:
  Environment(Scenario scenario, std::uint64_t channel_seed);

  /// Starts an episode. `episode` is the raw index; it is normalized by
  /// `n_episodes` when the scenario asks for it.
  std::vector<AgentObservation> reset(int episode, int n_episodes, double epsilon);
  /// Same, with the fingerprint given directly.
  std::vector<AgentObservation> reset_fingerprint(double episode_fingerprint, double epsilon);

  StepOutcome step(std::span<const int> joint_action, double delta);

  /// Association uniform over SBSs with spare capacity and block counts that
  /// use exactly L. Throws std::invalid_argument when infeasible.
  std::vector<int> random_feasible_joint_action(Rng& rng) const;

  const Scenario& scenario() const { return scenario_; }
  const ActionCodec& codec() const { return codec_; }
  const ChannelRealization& channel() const { return current_; }
  std::size_t n_agents() const { return scenario_.n_ue(); }
  std::size_t observation_size() const { return hetnet::observation_size(scenario_.n_sbs()); }

 private:
  Scenario scenario_;
  ActionCodec codec_;
  std::optional<CompositionSampler> blocks_;  // empty when N l_max < L
  ChannelSampler sampler_;
  ChannelRealization current_;
  double episode_fp_ = 0.0;
  double epsilon_ = 0.0;
  bool started_ = false;
};

/// Per-agent reward: delta R_i + (1 - delta) R_t / N, zero for every agent
/// when the block budget is exceeded and for agents on an over-capacity SBS.
std::vector<double> compute_rewards(const ThroughputReport& report, std::span<const int> assoc, int ue_cap,
                                    double delta);

}  // namespace hetnet
