#pragma once

#include <cstddef>
#include <vector>

#include "env.hpp"
#include "radio.hpp"
#include "realization.hpp"
#include "topology.hpp"

namespace fixtures {

// All links in one state, zero shadowing, every unintended gain equal.
inline hetnet::ChannelRealization uniform_realization(std::size_t S, std::size_t N,
                                                      hetnet::LinkState s = hetnet::LinkState::Los,
                                                      double side_gain = 1.0) {
  hetnet::ChannelRealization r;
  r.n_sbs = S;
  r.n_ue = N;
  r.access_state.assign(S * N, s);
  r.access_shadow_db.assign(S * N, 0.0);
  r.unintended_gain.assign(S * N, side_gain);
  r.backhaul_shadow_db.assign(S, 0.0);
  r.mbs_ue_state.assign(N, s);
  r.mbs_ue_shadow_db.assign(N, 0.0);
  return r;
}

inline hetnet::Topology line_topology(std::vector<double> sbs_x, std::vector<double> ue_x) {
  hetnet::Topology t;
  t.radius = 1000.0;
  for (double x : sbs_x) t.sbs.push_back({x, 0.0});
  for (double x : ue_x) t.ue.push_back({x, 0.0});
  return t;
}

// Static LOS, zero shadowing, frozen: the tiny-instance channel.
inline hetnet::ChannelParams static_los() {
  hetnet::ChannelParams p;
  p.options.force_los = true;
  p.options.zero_shadowing = true;
  p.options.frozen = true;
  return p;
}

inline hetnet::Scenario scenario(const hetnet::Topology& t, int L, int l_max, int cap = 20,
                                 hetnet::ChannelParams ch = {}) {
  hetnet::Scenario sc;
  sc.topology = t;
  sc.channel = ch;
  sc.radio.n_blocks = L;
  sc.radio.l_max = l_max;
  sc.radio.ue_cap = cap;
  return sc;
}

inline hetnet::Scenario random_scenario(std::size_t S, std::size_t N, double radius, int L, int l_max,
                                        std::uint64_t seed, int cap = 20) {
  hetnet::Rng rng(seed);
  return scenario(hetnet::generate_topology(S, N, radius, rng), L, l_max, cap);
}

}  // namespace fixtures
