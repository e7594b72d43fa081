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

#include <cstdint>
#include <limits>

#include "rng.hpp"

namespace hetnet {

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

/// Close-in free-space reference distance model parameters for one band.
struct BandParams {
  double carrier_hz = 28e9;
  double exp_los = 2.1;
  double exp_nlos = 3.4;
  double sigma_los_db = 3.6;
  double sigma_nlos_db = 9.7;
  double ref_distance_m = 1.0;

  void validate() const;
  double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
};

/// Three-state blockage model. Rates are in 1/m.
struct BlockageParams {
  double a_los = 1.0 / 50.0;
  double a_out = 1.0 / 50.0;
  double b_out = 1.8;

  void validate() const;
};

enum class LinkState : std::uint8_t { Los = 0, Nlos = 1, Outage = 2 };

/// Observation encoding: LOS 0, NLOS 0.5, outage 1.
double encode(LinkState s);
const char* to_string(LinkState s);

/// Sector antenna: main-lobe gain inside the beamwidth, side-lobe gain elsewhere.
struct AntennaPattern {
  double main_gain_db = 0.0;
  double side_gain_db = 0.0;
  double beamwidth_rad = kPi;

  void validate() const;
  double main_linear() const;
  double side_linear() const;
  /// Probability that a uniformly oriented beam covers a given direction.
  double main_lobe_probability() const { return beamwidth_rad / (2.0 * kPi); }
};

struct StateProbs {
  double los = 1.0;
  double nlos = 0.0;
  double outage = 0.0;
};

StateProbs link_state_probs(double distance_m, const BlockageParams& bp);
LinkState sample_link_state(double distance_m, const BlockageParams& bp, Rng& rng);

struct PathLoss {
  double db = 0.0;
  bool clamped = false;  // distance was below the reference distance

  bool is_outage() const { return db == std::numeric_limits<double>::infinity(); }
  /// Linear channel gain (10^(-PL/10)); exactly 0 in outage.
  double linear_gain() const;
};

/// 20 log10(4 pi d0 / lambda).
double free_space_reference_db(const BandParams& band);

/// Path loss including a realized shadowing value. Outage returns +inf.
/// Distances below the reference distance are clamped to it.
PathLoss pathloss_db(double distance_m, const BandParams& band, LinkState state, double shadow_db);

/// Linear product G_tx * G_rx. Intended pairs are perfectly aligned; unintended
/// pairs draw each side's lobe independently with probability beamwidth / 2 pi.
double directivity_gain(bool intended, const AntennaPattern& tx, const AntennaPattern& rx, Rng& rng);

/// Zero-mean Gaussian shadowing in dB with the state's sigma.
/// Throws std::domain_error for the outage state.
double sample_shadowing(LinkState state, const BandParams& band, Rng& rng);

}  // namespace hetnet
