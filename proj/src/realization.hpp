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
#include <vector>

#include "channel.hpp"
#include "topology.hpp"

namespace hetnet {

struct Antennas {
  AntennaPattern mbs{20.0, -10.0, 30.0 * kPi / 180.0};
  AntennaPattern sbs{10.0, 0.0, 40.0 * kPi / 180.0};
  AntennaPattern ue{5.0, 0.0, 50.0 * kPi / 180.0};
};

struct ChannelOptions {
  bool shadowing_per_step = true;  // false: one standard-normal draw per link, scaled by the state's sigma
  bool force_los = false;          // every access and MBS->UE link in LOS
  bool zero_shadowing = false;     // all shadowing values are 0 dB
  bool frozen = false;             // the first realization is reused for every step
  std::uint64_t frozen_seed = 0;   // a frozen channel is drawn from this seed, not the sampler's
};

struct ChannelParams {
  BandParams access{28e9, 2.1, 3.4, 3.6, 9.7, 1.0};
  BandParams backhaul{73e9, 2.0, 2.0, 4.2, 4.2, 1.0};
  BlockageParams blockage;
  Antennas antennas;
  ChannelOptions options;

  void validate() const;
};

/// Everything random about one time step. Matrices are row-major [sbs][ue].
struct ChannelRealization {
  std::size_t n_sbs = 0;
  std::size_t n_ue = 0;
  std::vector<LinkState> access_state;
  std::vector<double> access_shadow_db;
  // Linear G_s * G_r of SBS j towards UE i when j does not serve i.
  std::vector<double> unintended_gain;
  std::vector<double> backhaul_shadow_db;  // per SBS, always LOS
  std::vector<LinkState> mbs_ue_state;     // used by the MBS-only comparison
  std::vector<double> mbs_ue_shadow_db;

  std::size_t at(std::size_t j, std::size_t i) const { return j * n_ue + i; }
  LinkState state(std::size_t j, std::size_t i) const { return access_state[at(j, i)]; }

  /// FNV-1a over the access and MBS->UE state codes.
  std::uint64_t state_hash() const;
};

/// Draws i.i.d. realizations for a fixed topology from its own RNG stream.
class ChannelSampler {
 public:
  ChannelSampler(const Topology& topo, ChannelParams params, std::uint64_t seed);

  ChannelRealization next();

  const ChannelParams& params() const { return params_; }

 private:
  ChannelRealization draw();

  Topology topo_;
  ChannelParams params_;
  Rng rng_;
  // Standard-normal shadowing seeds when shadowing is held fixed across steps.
  std::vector<double> fixed_access_z_;
  std::vector<double> fixed_backhaul_z_;
  std::vector<double> fixed_mbs_z_;
  bool have_frozen_ = false;
  ChannelRealization frozen_;
};

/// Mixes a per-step hash into a running trace hash.
std::uint64_t combine_hash(std::uint64_t running, std::uint64_t step_hash);

}  // namespace hetnet
