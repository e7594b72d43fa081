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


#include "baselines.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "maddqn.hpp"

namespace hetnet {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Maddqn: return "maddqn";
    case Scheme::Hl: return "hl";
    case Scheme::Sl: return "sl";
    case Scheme::Da: return "da";
    case Scheme::MbsOnly: return "mbs_only";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::Maddqn, Scheme::Hl, Scheme::Sl, Scheme::Da, Scheme::MbsOnly})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected maddqn, hl, sl, da or mbs_only)");
}

namespace {

double sbs_access_total(const LinkBudget& b, std::span<const int> assoc, std::size_t j, double w_access_hz) {
  std::size_t load = 0;
  for (int a : assoc)
    if (a == static_cast<int>(j)) ++load;
  double total = 0.0;
  for (std::size_t i = 0; i < assoc.size(); ++i)
    if (assoc[i] == static_cast<int>(j)) total += access_throughput(b.sinr(j, i), w_access_hz, load);
  return total;
}

// UE-proposing deferred acceptance. `prefs[i]` lists SBSs in UE i's order;
// `worse(j, a, b)` says whether SBS j ranks UE a below UE b.
std::vector<int> propose_and_displace(std::size_t n_ue, std::size_t n_sbs, int cap,
                                      const std::vector<std::vector<std::size_t>>& prefs,
                                      const std::function<bool(std::size_t, std::size_t, std::size_t)>& worse) {
  std::vector<int> assoc(n_ue, kUnassociated);
  std::vector<std::size_t> next(n_ue, 0);
  std::vector<std::vector<std::size_t>> held(n_sbs);
  std::deque<std::size_t> free;
  for (std::size_t i = 0; i < n_ue; ++i) free.push_back(i);
  while (!free.empty()) {
    const std::size_t i = free.front();
    free.pop_front();
    if (next[i] >= prefs[i].size()) continue;
    const std::size_t j = prefs[i][next[i]++];
    held[j].push_back(i);
    assoc[i] = static_cast<int>(j);
    if (held[j].size() > static_cast<std::size_t>(cap)) {
      auto victim = held[j].begin();
      for (auto it = held[j].begin(); it != held[j].end(); ++it)
        if (worse(j, *it, *victim)) victim = it;
      const std::size_t v = *victim;
      held[j].erase(victim);
      assoc[v] = kUnassociated;
      free.push_back(v);
    }
  }
  return assoc;
}

}  // namespace

double access_total(const LinkBudget& budget, std::span<const int> assoc, const RadioParams& radio) {
  double total = 0.0;
  for (std::size_t j = 0; j < budget.n_sbs; ++j) total += sbs_access_total(budget, assoc, j, radio.w_access_hz);
  return total;
}

std::vector<int> hl_associate(const LinkBudget& budget, const RadioParams& radio,
                              std::vector<double>* accepted_totals) {
  const std::size_t S = budget.n_sbs;
  const std::size_t N = budget.n_ue;
  struct Pair {
    double snr;
    std::size_t ue;
    std::size_t sbs;
  };
  std::vector<Pair> pairs;
  for (std::size_t j = 0; j < S; ++j)
    for (std::size_t i = 0; i < N; ++i)
      if (budget.signal_mw[budget.at(j, i)] > 0.0) pairs.push_back({budget.snr(j, i), i, j});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.snr != b.snr) return a.snr > b.snr;
    if (a.ue != b.ue) return a.ue < b.ue;
    return a.sbs < b.sbs;
  });

  std::vector<int> assoc(N, kUnassociated);
  std::vector<int> load(S, 0);
  std::vector<double> sbs_total(S, 0.0);
  double total = 0.0;
  if (accepted_totals) accepted_totals->clear();
  for (const Pair& p : pairs) {
    if (assoc[p.ue] != kUnassociated || load[p.sbs] >= radio.ue_cap) continue;
    assoc[p.ue] = static_cast<int>(p.sbs);
    const double trial_sbs = sbs_access_total(budget, assoc, p.sbs, radio.w_access_hz);
    const double trial = total - sbs_total[p.sbs] + trial_sbs;
    if (trial > total) {
      total = trial;
      sbs_total[p.sbs] = trial_sbs;
      ++load[p.sbs];
      if (accepted_totals) accepted_totals->push_back(total);
    } else {
      assoc[p.ue] = kUnassociated;
    }
  }

  for (std::size_t i = 0; i < N; ++i) {
    if (assoc[i] != kUnassociated) continue;
    int best = kUnassociated;
    double best_snr = 0.0;
    for (std::size_t j = 0; j < S; ++j) {
      if (load[j] >= radio.ue_cap || budget.signal_mw[budget.at(j, i)] <= 0.0) continue;
      const double s = budget.snr(j, i);
      if (best == kUnassociated || s > best_snr) {
        best = static_cast<int>(j);
        best_snr = s;
      }
    }
    if (best != kUnassociated) {
      assoc[i] = best;
      ++load[static_cast<std::size_t>(best)];
    }
  }
  return assoc;
}

std::vector<double> load_based_backhaul(std::span<const int> assoc, std::size_t n_sbs) {
  std::vector<double> beta(n_sbs, 0.0);
  std::size_t served = 0;
  for (int j : assoc) {
    if (j == kUnassociated) continue;
    if (j < 0 || static_cast<std::size_t>(j) >= n_sbs) throw std::invalid_argument("SBS index out of range");
    beta[static_cast<std::size_t>(j)] += 1.0;
    ++served;
  }
  if (served > 0)
    for (double& b : beta) b /= static_cast<double>(served);
  return beta;
}

std::vector<int> sl_associate(const LinkBudget& budget, const RadioParams& radio) {
  const std::size_t S = budget.n_sbs;
  const std::size_t N = budget.n_ue;
  std::vector<std::vector<std::size_t>> prefs(N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < S; ++j)
      if (budget.signal_mw[budget.at(j, i)] > 0.0) prefs[i].push_back(j);
    std::stable_sort(prefs[i].begin(), prefs[i].end(),
                     [&](std::size_t a, std::size_t b) { return budget.snr(a, i) > budget.snr(b, i); });
  }
  return propose_and_displace(N, S, radio.ue_cap, prefs, [&](std::size_t j, std::size_t a, std::size_t b) {
    const double sa = budget.snr(j, a);
    const double sb = budget.snr(j, b);
    return sa != sb ? sa < sb : a > b;
  });
}

std::vector<int> da_associate(const Topology& topo, const RadioParams& radio) {
  const std::size_t S = topo.n_sbs();
  const std::size_t N = topo.n_ue();
  std::vector<std::vector<std::size_t>> prefs(N);
  for (std::size_t i = 0; i < N; ++i) {
    prefs[i].resize(S);
    std::iota(prefs[i].begin(), prefs[i].end(), std::size_t{0});
    std::stable_sort(prefs[i].begin(), prefs[i].end(), [&](std::size_t a, std::size_t b) {
      return topo.sbs_ue_distance(a, i) < topo.sbs_ue_distance(b, i);
    });
  }
  return propose_and_displace(N, S, radio.ue_cap, prefs, [&](std::size_t j, std::size_t a, std::size_t b) {
    const double da = topo.sbs_ue_distance(j, a);
    const double db = topo.sbs_ue_distance(j, b);
    return da != db ? da > db : a > b;
  });
}

std::vector<double> equal_backhaul(std::size_t n_sbs) {
  if (n_sbs == 0) return {};
  return std::vector<double>(n_sbs, 1.0 / static_cast<double>(n_sbs));
}

Allocation to_allocation(std::span<const int> assoc, std::span<const double> sbs_beta) {
  std::vector<int> load(sbs_beta.size(), 0);
  for (int j : assoc)
    if (j != kUnassociated) ++load.at(static_cast<std::size_t>(j));
  Allocation a;
  a.assoc.assign(assoc.begin(), assoc.end());
  a.beta.assign(assoc.size(), 0.0);
  for (std::size_t i = 0; i < assoc.size(); ++i) {
    if (assoc[i] == kUnassociated) continue;
    const auto j = static_cast<std::size_t>(assoc[i]);
    a.beta[i] = sbs_beta[j] / load[j];
  }
  return a;
}

BaselineDecision baseline_decision(Scheme scheme, const Scenario& sc, const LinkBudget& budget) {
  BaselineDecision d;
  switch (scheme) {
    case Scheme::Hl:
      d.assoc = hl_associate(budget, sc.radio);
      d.sbs_beta = load_based_backhaul(d.assoc, sc.n_sbs());
      break;
    case Scheme::Sl:
      d.assoc = sl_associate(budget, sc.radio);
      d.sbs_beta = load_based_backhaul(d.assoc, sc.n_sbs());
      break;
    case Scheme::Da:
      d.assoc = da_associate(sc.topology, sc.radio);
      d.sbs_beta = equal_backhaul(sc.n_sbs());
      break;
    default:
      throw std::invalid_argument("baseline_decision: " + to_string(scheme) + " is not an SBS baseline");
  }
  return d;
}

namespace {

// Reports shares granted to SBSs that serve nobody as unused backhaul capacity.
void apply_sbs_shares(ThroughputReport& r, const LinkBudget& budget, const RadioParams& radio,
                      std::span<const double> sbs_beta) {
  r.beta_sum = 0.0;
  for (std::size_t j = 0; j < sbs_beta.size(); ++j) {
    r.sbs_beta[j] = sbs_beta[j];
    r.beta_sum += sbs_beta[j];
    if (r.sbs_load[j] == 0 && sbs_beta[j] > 0.0) {
      const double w = sbs_beta[j] * radio.w_backhaul_hz;
      r.sbs_backhaul[j] = w * std::log2(1.0 + backhaul_snr(budget, j, w));
    }
  }
}

}  // namespace

ThroughputReport mbs_only_throughput(const Topology& topo, const ChannelRealization& real, const ChannelParams& chan,
                                     const RadioParams& radio) {
  const std::size_t N = topo.n_ue();
  if (real.mbs_ue_state.size() != N) throw std::invalid_argument("channel realization does not match topology");
  ThroughputReport r;
  r.r_access.assign(N, 0.0);
  if (N == 0) return r;
  const double noise = noise_power_mw(radio.n0_dbm_per_mhz, radio.w_access_hz);
  const double tx = dbm_to_mw(radio.p_mbs_dbm) * chan.antennas.mbs.main_linear() * chan.antennas.ue.main_linear();
  for (std::size_t i = 0; i < N; ++i) {
    const double gain =
        pathloss_db(topo.mbs_ue_distance(i), chan.access, real.mbs_ue_state[i], real.mbs_ue_shadow_db[i]).linear_gain();
    r.r_access[i] = access_throughput(tx * gain / noise, radio.w_access_hz, N);
    r.total += r.r_access[i];
  }
  r.r_backhaul = r.r_access;
  r.r_actual = r.r_access;
  return r;
}

EvalMetrics evaluate_baseline(Scheme scheme, const Scenario& sc, int n_steps, std::uint64_t seed) {
  if (scheme == Scheme::Maddqn) throw std::invalid_argument("evaluate_baseline: maddqn needs trained policies");
  sc.validate();
  ChannelSampler sampler(sc.topology, sc.channel, derive_seed(seed, Stream::EvalChannel));
  EvalMetrics m;
  m.scheme = to_string(scheme);
  m.seed = seed;
  for (int t = 0; t < n_steps; ++t) {
    const ChannelRealization real = sampler.next();
    ThroughputReport report;
    if (scheme == Scheme::MbsOnly) {
      report = mbs_only_throughput(sc.topology, real, sc.channel, sc.radio);
    } else {
      const LinkBudget budget = compute_link_budget(sc.topology, real, sc.channel, sc.radio);
      const BaselineDecision d = baseline_decision(scheme, sc, budget);
      report = evaluate_allocation(budget, to_allocation(d.assoc, d.sbs_beta), sc.radio);
      apply_sbs_shares(report, budget, sc.radio, d.sbs_beta);
    }
    const bool effective = report.backhaul_ok && report.capacity_ok;
    m.steps.push_back(make_step_record(t, report, effective, real.state_hash()));
  }
  finalize(m);
  return m;
}

}  // namespace hetnet
