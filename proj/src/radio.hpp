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
#include <vector>

#include "realization.hpp"
#include "topology.hpp"

namespace hetnet {

struct RadioParams {
  double p_sbs_dbm = 30.0;
  double p_mbs_dbm = 40.0;
  double w_access_hz = 1e9;
  double w_backhaul_hz = 6e9;
  double n0_dbm_per_mhz = -114.0;
  int n_blocks = 300;  // L
  int l_max = 12;
  int ue_cap = 20;  // N_s

  void validate() const;
};

inline constexpr int kUnassociated = -1;

/// Per-UE serving SBS and backhaul resource-block count.
struct JointDecision {
  std::vector<int> assoc;
  std::vector<int> blocks;
};

/// General allocation: per-UE serving SBS (or kUnassociated) and per-UE share
/// of the backhaul bandwidth. Block decisions map onto this with beta = l / L.
struct Allocation {
  std::vector<int> assoc;
  std::vector<double> beta;
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);
/// n0 [dBm/MHz] + 10 log10(bandwidth / 1 MHz), in mW.
double noise_power_mw(double n0_dbm_per_mhz, double bandwidth_hz);

/// Received powers of one time step, computed once and shared by every
/// decision evaluated on that step.
struct LinkBudget {
  std::size_t n_sbs = 0;
  std::size_t n_ue = 0;
  std::vector<double> signal_mw;        // [j][i] aligned-beam received power, 0 in outage
  std::vector<double> interference_mw;  // [j][i] received power with the sampled unintended gains
  std::vector<double> interference_total_mw;  // per UE, summed over all SBSs
  double access_noise_mw = 0.0;
  std::vector<double> backhaul_rx_mw;  // per SBS
  double n0_mw_per_hz = 0.0;

  std::size_t at(std::size_t j, std::size_t i) const { return j * n_ue + i; }
  /// SINR of UE i when served by SBS j; every other SBS interferes.
  double sinr(std::size_t j, std::size_t i) const;
  /// Interference-free link SNR.
  double snr(std::size_t j, std::size_t i) const { return signal_mw[at(j, i)] / access_noise_mw; }
};

LinkBudget compute_link_budget(const Topology& topo, const ChannelRealization& real, const ChannelParams& chan,
                               const RadioParams& radio);

double access_sinr(const LinkBudget& budget, const JointDecision& decision, std::size_t ue);

/// (W_ac / N_j) log2(1 + sinr) in bit/s.
double access_throughput(double sinr, double w_access_hz, std::size_t users_on_sbs);

/// SNR at an SBS when its backhaul link gets w_hz. Throws for w_hz <= 0.
double backhaul_snr(const LinkBudget& budget, std::size_t sbs, double w_hz);
double backhaul_snr(const Topology& topo, const ChannelRealization& real, const ChannelParams& chan,
                    const RadioParams& radio, std::size_t sbs, double w_hz);

/// beta_i W_bk log2(1 + snr_j) where snr_j uses the SBS aggregate bandwidth.
double backhaul_throughput_ue(const LinkBudget& budget, const JointDecision& decision, const RadioParams& radio,
                              std::size_t ue);

struct ThroughputReport {
  std::vector<double> r_access;    // bit/s per UE
  std::vector<double> r_backhaul;  // bit/s per UE
  std::vector<double> r_actual;    // min of the two
  std::vector<double> sbs_access;
  std::vector<double> sbs_backhaul;
  std::vector<double> sbs_actual;
  std::vector<int> sbs_load;
  std::vector<double> sbs_beta;
  double total = 0.0;  // sum of r_actual
  double beta_sum = 0.0;
  int block_sum = 0;

  bool backhaul_ok = true;  // sum of shares within the total bandwidth
  bool capacity_ok = true;  // every SBS load within N_s
  bool per_ue_ok = true;    // every block count within [0, l_max]
  bool feasible = true;
};

/// Rates and constraint flags for a block decision. Infeasible decisions are
/// reported, never rejected. UEs on an over-capacity SBS get zero access rate.
ThroughputReport evaluate_decision(const LinkBudget& budget, const JointDecision& decision, const RadioParams& radio);
ThroughputReport evaluate_decision(const Topology& topo, const ChannelRealization& real, const ChannelParams& chan,
                                   const JointDecision& decision, const RadioParams& radio);

ThroughputReport evaluate_allocation(const LinkBudget& budget, const Allocation& alloc, const RadioParams& radio);

/// beta_t observation: the backhaul share sum when it fits, otherwise 0.
double observed_beta(double beta_sum);

}  // namespace hetnet
