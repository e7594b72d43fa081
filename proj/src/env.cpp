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


#include "env.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hetnet {

void Scenario::validate() const {
  if (topology.n_sbs() == 0 || topology.n_ue() == 0) throw std::invalid_argument("scenario: empty topology");
  channel.validate();
  radio.validate();
  if (!(observation.rate_scale_bps > 0.0)) throw std::invalid_argument("scenario: rate scale must be positive");
}

std::vector<double> AgentObservation::to_vector(const ObservationOptions& opt) const {
  std::vector<double> v;
  v.reserve(link_states.size() + 5);
  v.push_back(beta_prev);
  v.push_back(total_rate_prev / opt.rate_scale_bps);
  v.insert(v.end(), link_states.begin(), link_states.end());
  v.push_back(own_rate_prev / opt.rate_scale_bps);
  v.push_back(episode);
  v.push_back(epsilon);
  return v;
}

ActionCodec::ActionCodec(std::size_t n_sbs, int l_max) : n_sbs_(n_sbs), l_max_(l_max) {
  if (n_sbs == 0 || l_max < 0) throw std::invalid_argument("ActionCodec: invalid dimensions");
}

Action ActionCodec::decode(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= size())
    throw std::out_of_range("action index " + std::to_string(index) + " out of range");
  return {index / (l_max_ + 1), index % (l_max_ + 1)};
}

int ActionCodec::encode(Action a) const {
  if (a.sbs < 0 || static_cast<std::size_t>(a.sbs) >= n_sbs_ || a.blocks < 0 || a.blocks > l_max_)
    throw std::out_of_range("action (" + std::to_string(a.sbs) + ", " + std::to_string(a.blocks) + ") out of range");
  return a.sbs * (l_max_ + 1) + a.blocks;
}

CompositionSampler::CompositionSampler(std::size_t parts, int total, int cap)
    : parts_(parts), total_(total), cap_(cap) {
  if (parts == 0 || total < 0 || cap < 0) throw std::invalid_argument("CompositionSampler: invalid arguments");
  if (static_cast<long long>(parts) * cap < total)
    throw std::invalid_argument("cannot split " + std::to_string(total) + " blocks over " + std::to_string(parts) +
                                " UEs with at most " + std::to_string(cap) + " each");
  table_.assign(parts + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
  table_[0][0] = 1.0;
  for (std::size_t k = 1; k <= parts; ++k) {
    for (int s = 0; s <= total; ++s) {
      double ways = 0.0;
      for (int v = 0; v <= std::min(cap, s); ++v) ways += table_[k - 1][s - v];
      table_[k][s] = ways;
    }
  }
}

std::vector<int> CompositionSampler::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> out(parts_, 0);
  int remaining = total_;
  for (std::size_t p = 0; p < parts_; ++p) {
    const std::size_t left = parts_ - p;  // parts still to fill, including this one
    const double u = unif(rng) * table_[left][remaining];
    double acc = 0.0;
    int chosen = -1;
    int last_valid = -1;
    for (int v = 0; v <= std::min(cap_, remaining); ++v) {
      const double w = table_[left - 1][remaining - v];
      if (w == 0.0) continue;
      last_valid = v;
      acc += w;
      if (u < acc) {
        chosen = v;
        break;
      }
    }
    if (chosen < 0) chosen = last_valid;  // u landed on the rounding edge
    out[p] = chosen;
    remaining -= chosen;
  }
  return out;
}

JointDecision decode_joint(const ActionCodec& codec, std::span<const int> joint_action) {
  JointDecision d;
  d.assoc.reserve(joint_action.size());
  d.blocks.reserve(joint_action.size());
  for (int a : joint_action) {
    const Action act = codec.decode(a);
    d.assoc.push_back(act.sbs);
    d.blocks.push_back(act.blocks);
  }
  return d;
}

std::vector<double> compute_rewards(const ThroughputReport& report, std::span<const int> assoc, int ue_cap,
                                    double delta) {
  const std::size_t N = assoc.size();
  std::vector<double> rewards(N, 0.0);
  if (!report.backhaul_ok) return rewards;
  const double common = report.total / static_cast<double>(N);
  for (std::size_t i = 0; i < N; ++i) {
    const int j = assoc[i];
    if (j < 0 || report.sbs_load[static_cast<std::size_t>(j)] > ue_cap) continue;
    rewards[i] = (delta * report.r_actual[i] + (1.0 - delta) * common) / 1e9;
  }
  return rewards;
}

std::vector<AgentObservation> initial_observations(const Scenario& sc, const ChannelRealization& real,
                                                   double episode_fingerprint, double epsilon) {
  const std::size_t S = sc.n_sbs();
  const std::size_t N = sc.n_ue();
  std::vector<AgentObservation> obs(N);
  for (std::size_t i = 0; i < N; ++i) {
    auto& o = obs[i];
    o.link_states.resize(S);
    for (std::size_t j = 0; j < S; ++j) o.link_states[j] = encode(real.state(j, i));
    o.episode = episode_fingerprint;
    o.epsilon = epsilon;
  }
  return obs;
}

StepOutcome compute_step(const Scenario& sc, const ActionCodec& codec, std::span<const int> joint_action,
                         const ChannelRealization& current, const ChannelRealization& next, double delta,
                         double episode_fingerprint, double epsilon) {
  const std::size_t N = sc.n_ue();
  if (joint_action.size() != N) throw std::invalid_argument("joint action length must equal the number of UEs");
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must be in [0, 1]");

  const JointDecision decision = decode_joint(codec, joint_action);
  StepOutcome out;
  out.report = evaluate_decision(compute_link_budget(sc.topology, current, sc.channel, sc.radio), decision, sc.radio);
  out.state_hash = current.state_hash();
  out.effective = out.report.backhaul_ok && out.report.capacity_ok;
  out.rewards = compute_rewards(out.report, decision.assoc, sc.radio.ue_cap, delta);

  // Without the backhaul grant no UE is served; otherwise over-capacity UEs
  // already carry zero access rate.
  out.realized_rates.assign(N, 0.0);
  if (out.report.backhaul_ok) {
    out.realized_rates = out.report.r_actual;
    out.realized_total = out.report.total;
  }
  out.beta_observation = observed_beta(out.report.beta_sum);

  out.next_obs = initial_observations(sc, next, episode_fingerprint, epsilon);
  for (std::size_t i = 0; i < N; ++i) {
    out.next_obs[i].beta_prev = out.beta_observation;
    out.next_obs[i].total_rate_prev = out.realized_total;
    out.next_obs[i].own_rate_prev = out.realized_rates[i];
  }
  return out;
}

Environment::Environment(Scenario scenario, std::uint64_t channel_seed)
    : scenario_(std::move(scenario)),
      codec_(scenario_.n_sbs(), scenario_.radio.l_max),
      sampler_(scenario_.topology, scenario_.channel, channel_seed) {
  scenario_.validate();
  const auto& r = scenario_.radio;
  if (static_cast<long long>(scenario_.n_ue()) * r.l_max >= r.n_blocks)
    blocks_.emplace(scenario_.n_ue(), r.n_blocks, r.l_max);
}

std::vector<AgentObservation> Environment::reset(int episode, int n_episodes, double epsilon) {
  const double fp = scenario_.observation.normalize_episode && n_episodes > 0
                       ? static_cast<double>(episode) / static_cast<double>(n_episodes)
                       : static_cast<double>(episode);
  return reset_fingerprint(fp, epsilon);
}

std::vector<AgentObservation> Environment::reset_fingerprint(double episode_fingerprint, double epsilon) {
  episode_fp_ = episode_fingerprint;
  epsilon_ = epsilon;
  current_ = sampler_.next();
  started_ = true;
  return initial_observations(scenario_, current_, episode_fp_, epsilon_);
}

StepOutcome Environment::step(std::span<const int> joint_action, double delta) {
  if (!started_) throw std::logic_error("Environment::step called before reset");
  ChannelRealization next = sampler_.next();
  StepOutcome out = compute_step(scenario_, codec_, joint_action, current_, next, delta, episode_fp_, epsilon_);
  current_ = std::move(next);
  return out;
}

std::vector<int> Environment::random_feasible_joint_action(Rng& rng) const {
  const std::size_t S = scenario_.n_sbs();
  const std::size_t N = scenario_.n_ue();
  const int cap = scenario_.radio.ue_cap;
  if (!blocks_)
    throw std::invalid_argument("random exploration needs N * l_max >= L (N=" + std::to_string(N) +
                                ", l_max=" + std::to_string(scenario_.radio.l_max) +
                                ", L=" + std::to_string(scenario_.radio.n_blocks) + ")");
  if (N > S * static_cast<std::size_t>(cap))
    throw std::invalid_argument("random exploration needs N <= S * N_s");

  std::uniform_int_distribution<std::size_t> pick_sbs(0, S - 1);
  std::vector<int> assoc(N);
  std::vector<int> load(S, 0);
  for (std::size_t i = 0; i < N; ++i) {
    assoc[i] = static_cast<int>(pick_sbs(rng));
    ++load[static_cast<std::size_t>(assoc[i])];
  }
  // Repair: overflow UEs of a full SBS are re-drawn among SBSs with room.
  for (std::size_t j = 0; j < S; ++j) {
    if (load[j] <= cap) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < N; ++i)
      if (assoc[i] == static_cast<int>(j)) members.push_back(i);
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t m = static_cast<std::size_t>(cap); m < members.size(); ++m) {
      std::vector<std::size_t> open;
      for (std::size_t k = 0; k < S; ++k)
        if (load[k] < cap) open.push_back(k);
      const std::size_t target = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
      --load[j];
      ++load[target];
      assoc[members[m]] = static_cast<int>(target);
    }
  }

  const std::vector<int> blocks = blocks_->sample(rng);
  std::vector<int> actions(N);
  for (std::size_t i = 0; i < N; ++i) actions[i] = codec_.encode({assoc[i], blocks[i]});
  return actions;
}

}  // namespace hetnet
