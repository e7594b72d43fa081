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


#include "radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hetnet {

namespace {

constexpr double kBetaTolerance = 1e-12;

void check_shape(const LinkBudget& budget, std::size_t n_assoc) {
  if (n_assoc != budget.n_ue) throw std::invalid_argument("decision size does not match the number of UEs");
}

}  // namespace

void RadioParams::validate() const {
  if (!std::isfinite(p_sbs_dbm) || !std::isfinite(p_mbs_dbm)) throw std::invalid_argument("radio: powers must be finite");
  if (!(w_access_hz > 0.0) || !(w_backhaul_hz > 0.0)) throw std::invalid_argument("radio: bandwidths must be positive");
  if (!std::isfinite(n0_dbm_per_mhz)) throw std::invalid_argument("radio: noise density must be finite");
  if (n_blocks < 1) throw std::invalid_argument("radio: need at least one backhaul block");
  if (l_max < 1 || l_max > n_blocks) throw std::invalid_argument("radio: l_max must be in [1, L]");
  if (ue_cap < 1) throw std::invalid_argument("radio: per-SBS UE cap must be >= 1");
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double noise_power_mw(double n0_dbm_per_mhz, double bandwidth_hz) {
  return dbm_to_mw(n0_dbm_per_mhz + 10.0 * std::log10(bandwidth_hz / 1e6));
}

double LinkBudget::sinr(std::size_t j, std::size_t i) const {
  const std::size_t k = at(j, i);
  const double signal = signal_mw[k];
  if (signal == 0.0) return 0.0;
  // Remove SBS j's own unintended term: it serves i with aligned beams.
  const double interference = std::max(0.0, interference_total_mw[i] - interference_mw[k]);
  return signal / (access_noise_mw + interference);
}

LinkBudget compute_link_budget(const Topology& topo, const ChannelRealization& real, const ChannelParams& chan,
                               const RadioParams& radio) {
  const std::size_t S = topo.n_sbs();
  const std::size_t N = topo.n_ue();
  if (real.n_sbs != S || real.n_ue != N) throw std::invalid_argument("channel realization does not match topology");
  LinkBudget b;
  b.n_sbs = S;
  b.n_ue = N;
  b.signal_mw.assign(S * N, 0.0);
  b.interference_mw.assign(S * N, 0.0);
  b.interference_total_mw.assign(N, 0.0);
  b.access_noise_mw = noise_power_mw(radio.n0_dbm_per_mhz, radio.w_access_hz);
  b.n0_mw_per_hz = dbm_to_mw(radio.n0_dbm_per_mhz) / 1e6;

  const double p_sbs = dbm_to_mw(radio.p_sbs_dbm);
  const double aligned = chan.antennas.sbs.main_linear() * chan.antennas.ue.main_linear();
  for (std::size_t j = 0; j < S; ++j) {
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t k = b.at(j, i);
      const double gain =
          pathloss_db(topo.sbs_ue_distance(j, i), chan.access, real.access_state[k], real.access_shadow_db[k])
              .linear_gain();
      b.signal_mw[k] = p_sbs * aligned * gain;
      b.interference_mw[k] = p_sbs * real.unintended_gain[k] * gain;
      b.interference_total_mw[i] += b.interference_mw[k];
    }
  }

  const double p_mbs = dbm_to_mw(radio.p_mbs_dbm);
  const double bk_gain = chan.antennas.mbs.main_linear() * chan.antennas.sbs.main_linear();
  b.backhaul_rx_mw.resize(S);
  for (std::size_t j = 0; j < S; ++j) {
    const double gain =
        pathloss_db(topo.mbs_sbs_distance(j), chan.backhaul, LinkState::Los, real.backhaul_shadow_db[j]).linear_gain();
    b.backhaul_rx_mw[j] = p_mbs * bk_gain * gain;
  }
  return b;
}

double access_sinr(const LinkBudget& budget, const JointDecision& decision, std::size_t ue) {
  check_shape(budget, decision.assoc.size());
  const int j = decision.assoc.at(ue);
  if (j < 0 || static_cast<std::size_t>(j) >= budget.n_sbs)
    throw std::invalid_argument("access_sinr: UE " + std::to_string(ue) + " is not associated");
  return budget.sinr(static_cast<std::size_t>(j), ue);
}

double access_throughput(double sinr, double w_access_hz, std::size_t users_on_sbs) {
  if (users_on_sbs == 0 || sinr <= 0.0) return 0.0;
  return w_access_hz / static_cast<double>(users_on_sbs) * std::log2(1.0 + sinr);
}

double backhaul_snr(const LinkBudget& budget, std::size_t sbs, double w_hz) {
  if (!(w_hz > 0.0)) throw std::domain_error("backhaul_snr: bandwidth must be positive");
  return budget.backhaul_rx_mw.at(sbs) / (budget.n0_mw_per_hz * w_hz);
}

double backhaul_snr(const Topology& topo, const ChannelRealization& real, const ChannelParams& chan,
                    const RadioParams& radio, std::size_t sbs, double w_hz) {
  return backhaul_snr(compute_link_budget(topo, real, chan, radio), sbs, w_hz);
}

double backhaul_throughput_ue(const LinkBudget& budget, const JointDecision& decision, const RadioParams& radio,
                              std::size_t ue) {
  check_shape(budget, decision.assoc.size());
  const int j = decision.assoc.at(ue);
  const int l = decision.blocks.at(ue);
  if (j < 0 || l <= 0) return 0.0;
  int sbs_blocks = 0;
  for (std::size_t u = 0; u < decision.assoc.size(); ++u)
    if (decision.assoc[u] == j) sbs_blocks += std::max(0, decision.blocks[u]);
  const double w_j = static_cast<double>(sbs_blocks) / radio.n_blocks * radio.w_backhaul_hz;
  const double beta = static_cast<double>(l) / radio.n_blocks;
  return beta * radio.w_backhaul_hz * std::log2(1.0 + backhaul_snr(budget, static_cast<std::size_t>(j), w_j));
}

ThroughputReport evaluate_allocation(const LinkBudget& budget, const Allocation& alloc, const RadioParams& radio) {
  const std::size_t S = budget.n_sbs;
  const std::size_t N = budget.n_ue;
  check_shape(budget, alloc.assoc.size());
  if (alloc.beta.size() != N) throw std::invalid_argument("allocation share vector size does not match UEs");

  ThroughputReport r;
  r.r_access.assign(N, 0.0);
  r.r_backhaul.assign(N, 0.0);
  r.r_actual.assign(N, 0.0);
  r.sbs_access.assign(S, 0.0);
  r.sbs_backhaul.assign(S, 0.0);
  r.sbs_actual.assign(S, 0.0);
  r.sbs_load.assign(S, 0);
  r.sbs_beta.assign(S, 0.0);

  for (std::size_t i = 0; i < N; ++i) {
    const int j = alloc.assoc[i];
    if (j == kUnassociated) continue;
    if (j < 0 || static_cast<std::size_t>(j) >= S) throw std::invalid_argument("allocation: SBS index out of range");
    if (alloc.beta[i] < 0.0) throw std::invalid_argument("allocation: negative backhaul share");
    r.sbs_load[j] += 1;
    r.sbs_beta[j] += alloc.beta[i];
  }
  for (std::size_t i = 0; i < N; ++i) r.beta_sum += alloc.beta[i];
  r.backhaul_ok = r.beta_sum <= 1.0 + kBetaTolerance;
  for (std::size_t j = 0; j < S; ++j)
    if (r.sbs_load[j] > radio.ue_cap) r.capacity_ok = false;

  std::vector<double> spectral(S, 0.0);  // log2(1 + snr_j) at the SBS aggregate bandwidth
  for (std::size_t j = 0; j < S; ++j) {
    if (r.sbs_beta[j] > 0.0) spectral[j] = std::log2(1.0 + backhaul_snr(budget, j, r.sbs_beta[j] * radio.w_backhaul_hz));
  }

  for (std::size_t i = 0; i < N; ++i) {
    const int j = alloc.assoc[i];
    if (j == kUnassociated) continue;
    const auto sj = static_cast<std::size_t>(j);
    const bool over_cap = r.sbs_load[sj] > radio.ue_cap;
    r.r_access[i] = over_cap ? 0.0 : access_throughput(budget.sinr(sj, i), radio.w_access_hz, r.sbs_load[sj]);
    r.r_backhaul[i] = alloc.beta[i] * radio.w_backhaul_hz * spectral[sj];
    r.r_actual[i] = std::min(r.r_access[i], r.r_backhaul[i]);
    r.sbs_access[sj] += r.r_access[i];
    r.sbs_backhaul[sj] += r.r_backhaul[i];
    r.sbs_actual[sj] += r.r_actual[i];
    r.total += r.r_actual[i];
  }
  r.feasible = r.backhaul_ok && r.capacity_ok && r.per_ue_ok;
  return r;
}

ThroughputReport evaluate_decision(const LinkBudget& budget, const JointDecision& decision, const RadioParams& radio) {
  check_shape(budget, decision.assoc.size());
  if (decision.blocks.size() != decision.assoc.size())
    throw std::invalid_argument("decision block vector size does not match UEs");
  Allocation alloc;
  alloc.assoc = decision.assoc;
  alloc.beta.resize(decision.blocks.size());
  bool per_ue_ok = true;
  int block_sum = 0;
  for (std::size_t i = 0; i < decision.blocks.size(); ++i) {
    const int l = decision.blocks[i];
    if (l < 0 || l > radio.l_max) per_ue_ok = false;
    const int used = std::max(0, l);
    block_sum += used;
    alloc.beta[i] = static_cast<double>(used) / radio.n_blocks;
  }
  ThroughputReport r = evaluate_allocation(budget, alloc, radio);
  r.block_sum = block_sum;
  // Integer form of the bandwidth constraint avoids rounding at exactly L blocks.
  r.backhaul_ok = block_sum <= radio.n_blocks;
  r.per_ue_ok = per_ue_ok;
  r.feasible = r.backhaul_ok && r.capacity_ok && r.per_ue_ok;
  return r;
}

ThroughputReport evaluate_decision(const Topology& topo, const ChannelRealization& real, const ChannelParams& chan,
                                   const JointDecision& decision, const RadioParams& radio) {
  return evaluate_decision(compute_link_budget(topo, real, chan, radio), decision, radio);
}

double observed_beta(double beta_sum) { return beta_sum <= 1.0 + kBetaTolerance ? beta_sum : 0.0; }

}  // namespace hetnet
