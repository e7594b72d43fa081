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


#include "maddqn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "parallel.hpp"

namespace hetnet {

void TrainConfig::validate() const {
  if (episodes <= 0) throw std::invalid_argument("episodes must be positive");
  if (steps <= 0) throw std::invalid_argument("steps must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (minibatch == 0) throw std::invalid_argument("minibatch must be positive");
  if (replay_capacity < minibatch) throw std::invalid_argument("replay_capacity must be >= minibatch");
  if (target_sync_episodes <= 0) throw std::invalid_argument("target_sync_episodes must be positive");
  if (updates_per_episode < 0) throw std::invalid_argument("updates_per_episode must be >= 0");
  if (epsilon_start < 0.0 || epsilon_start > 1.0 || epsilon_end < 0.0 || epsilon_end > 1.0)
    throw std::invalid_argument("epsilon bounds must lie in [0, 1]");
  if (epsilon_decay_fraction <= 0.0 || epsilon_decay_fraction > 1.0)
    throw std::invalid_argument("epsilon_decay_fraction must lie in (0, 1]");
  if (fixed_epsilon && (*fixed_epsilon < 0.0 || *fixed_epsilon > 1.0))
    throw std::invalid_argument("fixed epsilon must lie in [0, 1]");
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("delta must lie in [0, 1]");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  for (int h : hidden)
    if (h <= 0) throw std::invalid_argument("hidden layer sizes must be positive");
  if (optimizer.learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");
}

double epsilon_schedule(int episode, const TrainConfig& cfg) {
  if (cfg.fixed_epsilon) return *cfg.fixed_epsilon;
  const double horizon = cfg.epsilon_decay_fraction * cfg.episodes;
  const double frac = std::min(1.0, static_cast<double>(episode) / horizon);
  return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

int act_greedy(const QNetwork& net, std::span<const double> obs) { return argmax(net.forward(obs)); }

namespace {

std::vector<int> layer_sizes(std::size_t in, const std::vector<int>& hidden, std::size_t out) {
  std::vector<int> sizes{static_cast<int>(in)};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(static_cast<int>(out));
  return sizes;
}

}  // namespace

Trainer::Trainer(Scenario scenario, TrainConfig cfg)
    : cfg_(std::move(cfg)),
      env_(std::move(scenario), derive_seed(cfg_.seed, Stream::TrainChannel)),
      coordinator_(make_rng(cfg_.seed, Stream::Coordinator)) {
  cfg_.validate();
  const std::size_t dim = env_.observation_size();
  const auto sizes = layer_sizes(dim, cfg_.hidden, env_.codec().size());
  agents_.reserve(env_.n_agents());
  for (std::size_t i = 0; i < env_.n_agents(); ++i) {
    Rng init = make_rng(cfg_.seed, Stream::AgentInit, i);
    QNetwork online(sizes, init);
    QNetwork target = online;
    RmsProp opt(online, cfg_.optimizer);
    agents_.push_back(Agent{std::move(online), std::move(target), std::move(opt),
                            ReplayMemory(cfg_.replay_capacity, dim), make_rng(cfg_.seed, Stream::AgentReplay, i)});
  }
}

void Trainer::run_episode(const StepObserver& observer) {
  const std::size_t N = agents_.size();
  const ObservationOptions& oo = env_.scenario().observation;
  const double eps = epsilon_schedule(episode_, cfg_);
  auto obs = env_.reset(episode_, cfg_.episodes, eps);

  std::vector<std::vector<double>> x(N);
  for (std::size_t i = 0; i < N; ++i) x[i] = obs[i].to_vector(oo);

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<int> actions(N);
  double throughput = 0.0;
  int effective = 0;
  int random_steps = 0;
  for (int t = 0; t < cfg_.steps; ++t) {
    const bool random = coin(coordinator_) < eps;
    if (random) {
      actions = env_.random_feasible_joint_action(coordinator_);
      ++random_steps;
    } else {
      for (std::size_t i = 0; i < N; ++i) actions[i] = act_greedy(agents_[i].online, x[i]);
    }
    const StepOutcome out = env_.step(actions, cfg_.delta);
    for (std::size_t i = 0; i < N; ++i) {
      auto next = out.next_obs[i].to_vector(oo);
      agents_[i].memory.push(x[i], actions[i], out.rewards[i], next);
      x[i] = std::move(next);
    }
    if (out.effective) {
      ++effective;
      throughput += out.realized_total;
    }
    if (observer) observer(StepEvent{episode_, t, random, actions, &out});
  }

  log_.mean_throughput_bps.push_back(throughput / cfg_.steps);
  log_.effective_steps.push_back(effective);
  log_.random_steps.push_back(random_steps);
  log_.epsilon.push_back(eps);
  learn();
  ++episode_;
  if (episode_ % cfg_.target_sync_episodes == 0)
    for (auto& a : agents_) sync_target(a.online, a.target);
}

void Trainer::learn() {
  std::vector<double> losses(agents_.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(agents_.size(), cfg_.workers, [&](std::size_t i) {
    Agent& a = agents_[i];
    if (a.memory.size() < cfg_.minibatch) return;
    Gradients grads = Gradients::zeros_like(a.online);
    double total = 0.0;
    for (int u = 0; u < cfg_.updates_per_episode; ++u) {
      const Batch batch = a.memory.sample(cfg_.minibatch, a.rng);
      const Vector y = ddqn_targets(batch, a.online, a.target, cfg_.gamma);
      total += loss_and_grads(a.online, batch.obs, batch.actions, y, grads) / static_cast<double>(batch.size());
      a.optimizer.step(a.online, grads);
    }
    if (cfg_.updates_per_episode > 0) losses[i] = total / cfg_.updates_per_episode;
  });
  log_.loss.push_back(std::move(losses));
}

void Trainer::run(const StepObserver& observer) {
  while (episode_ < cfg_.episodes) run_episode(observer);
}

PolicySet Trainer::policy() const {
  PolicySet p;
  for (const auto& a : agents_) p.networks.push_back(a.online);
  const int last = cfg_.episodes - 1;
  p.episode_fingerprint = env_.scenario().observation.normalize_episode
                              ? static_cast<double>(last) / static_cast<double>(cfg_.episodes)
                              : static_cast<double>(last);
  p.epsilon = epsilon_schedule(last, cfg_);
  return p;
}

TrainResult train(const Scenario& scenario, const TrainConfig& cfg, const StepObserver& observer) {
  Trainer trainer(scenario, cfg);
  trainer.run(observer);
  return TrainResult{trainer.policy(), trainer.log()};
}

StepRecord make_step_record(int step, const ThroughputReport& report, bool effective, std::uint64_t state_hash) {
  StepRecord r;
  r.step = step;
  r.effective = effective;
  r.total_bps = effective ? report.total : 0.0;
  r.beta_sum = report.beta_sum;
  r.state_hash = state_hash;
  r.sbs_access_bps = report.sbs_access;
  r.sbs_backhaul_bps = report.sbs_backhaul;
  r.sbs_actual_bps = report.sbs_actual;
  return r;
}

EvalMetrics evaluate(const PolicySet& policy, const Scenario& scenario, int n_steps, std::uint64_t seed) {
  if (policy.networks.size() != scenario.n_ue())
    throw std::invalid_argument("policy has " + std::to_string(policy.networks.size()) + " networks for " +
                                std::to_string(scenario.n_ue()) + " UEs");
  Environment env(scenario, derive_seed(seed, Stream::EvalChannel));
  const std::size_t N = scenario.n_ue();
  for (const auto& net : policy.networks) {
    if (static_cast<std::size_t>(net.input_size()) != env.observation_size() ||
        static_cast<std::size_t>(net.output_size()) != env.codec().size())
      throw std::invalid_argument("policy network shape does not match the scenario");
  }
  auto obs = env.reset_fingerprint(policy.episode_fingerprint, policy.epsilon);
  EvalMetrics m;
  m.scheme = "maddqn";
  m.seed = seed;
  std::vector<int> actions(N);
  for (int t = 0; t < n_steps; ++t) {
    for (std::size_t i = 0; i < N; ++i)
      actions[i] = act_greedy(policy.networks[i], obs[i].to_vector(scenario.observation));
    StepOutcome out = env.step(actions, 0.0);
    m.steps.push_back(make_step_record(t, out.report, out.effective, out.state_hash));
    obs = std::move(out.next_obs);
  }
  finalize(m);
  return m;
}

}  // namespace hetnet
