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
#include <string>
#include <vector>

#include "env.hpp"
#include "metrics.hpp"
#include "radio.hpp"

namespace hetnet {

enum class Scheme { Maddqn, Hl, Sl, Da, MbsOnly };

std::string to_string(Scheme s);
/// Accepts "maddqn", "hl", "sl", "da", "mbs_only". Throws std::invalid_argument.
Scheme parse_scheme(const std::string& name);

struct BaselineDecision {
  std::vector<int> assoc;        // per UE, kUnassociated when no usable link
  std::vector<double> sbs_beta;  // per SBS backhaul fraction
};

/// Total access throughput of an association (interference from every SBS).
double access_total(const LinkBudget& budget, std::span<const int> assoc, const RadioParams& radio);

/// Greedy pair acceptance in descending interference-free SNR order. When
/// `accepted_totals` is given it receives the running total after every
/// accepted pair.
std::vector<int> hl_associate(const LinkBudget& budget, const RadioParams& radio,
                              std::vector<double>* accepted_totals = nullptr);

/// beta_j = N_j / sum_k N_k.
std::vector<double> load_based_backhaul(std::span<const int> assoc, std::size_t n_sbs);

/// Max-SNR association; an over-subscribed SBS keeps its best N_s UEs and the
/// rest move on to their next choice.
std::vector<int> sl_associate(const LinkBudget& budget, const RadioParams& radio);

/// Nearest-SBS association with the same displacement rule by distance.
std::vector<int> da_associate(const Topology& topo, const RadioParams& radio);

std::vector<double> equal_backhaul(std::size_t n_sbs);

/// Spreads each SBS share equally over its UEs.
Allocation to_allocation(std::span<const int> assoc, std::span<const double> sbs_beta);

BaselineDecision baseline_decision(Scheme scheme, const Scenario& sc, const LinkBudget& budget);

/// Every UE on the MBS with an equal 1/N share of the access band (SNR over
/// the full band, as for SBS time sharing); no backhaul.
ThroughputReport mbs_only_throughput(const Topology& topo, const ChannelRealization& real, const ChannelParams& chan,
                                     const RadioParams& radio);

/// Per-step evaluation of a non-learning scheme on the evaluation trace of `seed`.
EvalMetrics evaluate_baseline(Scheme scheme, const Scenario& sc, int n_steps, std::uint64_t seed);

}  // namespace hetnet
