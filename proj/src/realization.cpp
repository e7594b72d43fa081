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


#include "realization.hpp"

#include <stdexcept>

namespace hetnet {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

double sigma_for(const BandParams& band, LinkState s) {
  return s == LinkState::Los ? band.sigma_los_db : band.sigma_nlos_db;
}

}  // namespace

void ChannelParams::validate() const {
  access.validate();
  backhaul.validate();
  blockage.validate();
  antennas.mbs.validate();
  antennas.sbs.validate();
  antennas.ue.validate();
}

std::uint64_t ChannelRealization::state_hash() const {
  std::uint64_t h = kFnvOffset;
  auto mix = [&h](std::uint8_t b) {
    h ^= b;
    h *= kFnvPrime;
  };
  for (auto s : access_state) mix(static_cast<std::uint8_t>(s));
  mix(0xff);
  for (auto s : mbs_ue_state) mix(static_cast<std::uint8_t>(s));
  return h;
}

std::uint64_t combine_hash(std::uint64_t running, std::uint64_t step_hash) {
  return splitmix64(running ^ step_hash);
}

ChannelSampler::ChannelSampler(const Topology& topo, ChannelParams params, std::uint64_t seed)
    : topo_(topo),
      params_(params),
      rng_(params.options.frozen ? derive_seed(params.options.frozen_seed, Stream::Oracle) : seed) {
  params_.validate();
  if (!params_.options.shadowing_per_step) {
    std::normal_distribution<double> z(0.0, 1.0);
    const std::size_t links = topo.n_sbs() * topo.n_ue();
    fixed_access_z_.resize(links);
    for (auto& v : fixed_access_z_) v = z(rng_);
    fixed_backhaul_z_.resize(topo.n_sbs());
    for (auto& v : fixed_backhaul_z_) v = z(rng_);
    fixed_mbs_z_.resize(topo.n_ue());
    for (auto& v : fixed_mbs_z_) v = z(rng_);
  }
}

ChannelRealization ChannelSampler::next() {
  if (params_.options.frozen) {
    if (!have_frozen_) {
      frozen_ = draw();
      have_frozen_ = true;
    }
    return frozen_;
  }
  return draw();
}

ChannelRealization ChannelSampler::draw() {
  const auto& opt = params_.options;
  const std::size_t S = topo_.n_sbs();
  const std::size_t N = topo_.n_ue();
  ChannelRealization r;
  r.n_sbs = S;
  r.n_ue = N;
  r.access_state.resize(S * N);
  r.access_shadow_db.resize(S * N);
  r.unintended_gain.resize(S * N);
  r.backhaul_shadow_db.resize(S);
  r.mbs_ue_state.resize(N);
  r.mbs_ue_shadow_db.resize(N);

  auto shadow = [&](LinkState s, const BandParams& band, const std::vector<double>& fixed, std::size_t k) {
    if (opt.zero_shadowing || s == LinkState::Outage) return 0.0;
    if (!opt.shadowing_per_step) return sigma_for(band, s) * fixed[k];
    return sample_shadowing(s, band, rng_);
  };

  for (std::size_t j = 0; j < S; ++j) {
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t k = r.at(j, i);
      const LinkState s = opt.force_los ? LinkState::Los
                                        : sample_link_state(topo_.sbs_ue_distance(j, i), params_.blockage, rng_);
      r.access_state[k] = s;
      r.access_shadow_db[k] = shadow(s, params_.access, fixed_access_z_, k);
      r.unintended_gain[k] = directivity_gain(false, params_.antennas.sbs, params_.antennas.ue, rng_);
    }
  }
  for (std::size_t j = 0; j < S; ++j)
    r.backhaul_shadow_db[j] = shadow(LinkState::Los, params_.backhaul, fixed_backhaul_z_, j);
  for (std::size_t i = 0; i < N; ++i) {
    const LinkState s =
        opt.force_los ? LinkState::Los : sample_link_state(topo_.mbs_ue_distance(i), params_.blockage, rng_);
    r.mbs_ue_state[i] = s;
    r.mbs_ue_shadow_db[i] = shadow(s, params_.access, fixed_mbs_z_, i);
  }
  return r;
}

}  // namespace hetnet
