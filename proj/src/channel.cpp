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


#include "channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "log.hpp"

namespace hetnet {

void BandParams::validate() const {
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("band: carrier frequency must be positive");
  if (!(exp_los >= 1.0) || !(exp_nlos >= 1.0))
    throw std::invalid_argument("band: path-loss exponents must be >= 1");
  if (!(sigma_los_db >= 0.0) || !(sigma_nlos_db >= 0.0))
    throw std::invalid_argument("band: shadowing sigmas must be >= 0");
  if (!(ref_distance_m > 0.0)) throw std::invalid_argument("band: reference distance must be positive");
}

void BlockageParams::validate() const {
  if (!(a_los > 0.0) || !(a_out > 0.0))
    throw std::invalid_argument("blockage: a_los and a_out must be positive");
  if (!std::isfinite(b_out)) throw std::invalid_argument("blockage: b_out must be finite");
}

double encode(LinkState s) {
  switch (s) {
    case LinkState::Los: return 0.0;
    case LinkState::Nlos: return 0.5;
    case LinkState::Outage: return 1.0;
  }
  return 1.0;
}

const char* to_string(LinkState s) {
  switch (s) {
    case LinkState::Los: return "LOS";
    case LinkState::Nlos: return "NLOS";
    case LinkState::Outage: return "Outage";
  }
  return "?";
}

void AntennaPattern::validate() const {
  if (!std::isfinite(main_gain_db) || !std::isfinite(side_gain_db))
    throw std::invalid_argument("antenna: gains must be finite");
  if (main_gain_db < side_gain_db) throw std::invalid_argument("antenna: main gain below side gain");
  if (!(beamwidth_rad > 0.0) || !(beamwidth_rad <= 2.0 * kPi))
    throw std::invalid_argument("antenna: beamwidth must be in (0, 2pi]");
}

double AntennaPattern::main_linear() const { return std::pow(10.0, main_gain_db / 10.0); }
double AntennaPattern::side_linear() const { return std::pow(10.0, side_gain_db / 10.0); }

StateProbs link_state_probs(double distance_m, const BlockageParams& bp) {
  if (!(distance_m >= 0.0)) throw std::domain_error("link_state_probs: negative distance");
  StateProbs p;
  p.outage = std::max(0.0, 1.0 - std::exp(-bp.a_out * distance_m + bp.b_out));
  p.los = (1.0 - p.outage) * std::exp(-bp.a_los * distance_m);
  p.nlos = std::max(0.0, 1.0 - p.outage - p.los);
  return p;
}

LinkState sample_link_state(double distance_m, const BlockageParams& bp, Rng& rng) {
  const StateProbs p = link_state_probs(distance_m, bp);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < p.los) return LinkState::Los;
  if (u < p.los + p.nlos) return LinkState::Nlos;
  return LinkState::Outage;
}

double PathLoss::linear_gain() const {
  if (is_outage()) return 0.0;
  return std::pow(10.0, -db / 10.0);
}

double free_space_reference_db(const BandParams& band) {
  return 20.0 * std::log10(4.0 * kPi * band.ref_distance_m / band.wavelength_m());
}

PathLoss pathloss_db(double distance_m, const BandParams& band, LinkState state, double shadow_db) {
  PathLoss out;
  if (state == LinkState::Outage) {
    out.db = std::numeric_limits<double>::infinity();
    return out;
  }
  double d = distance_m;
  if (!(d >= band.ref_distance_m)) {
    static bool warned = false;
    if (!warned) {
      warned = true;
      log_warning("distance " + std::to_string(distance_m) + " m below reference distance; clamping to " +
                  std::to_string(band.ref_distance_m) + " m (further clamps not reported)");
    }
    d = band.ref_distance_m;
    out.clamped = true;
  }
  const double exponent = state == LinkState::Los ? band.exp_los : band.exp_nlos;
  out.db = free_space_reference_db(band) + 10.0 * exponent * std::log10(d / band.ref_distance_m) + shadow_db;
  return out;
}

double directivity_gain(bool intended, const AntennaPattern& tx, const AntennaPattern& rx, Rng& rng) {
  if (intended) return tx.main_linear() * rx.main_linear();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double g_tx = unif(rng) < tx.main_lobe_probability() ? tx.main_linear() : tx.side_linear();
  const double g_rx = unif(rng) < rx.main_lobe_probability() ? rx.main_linear() : rx.side_linear();
  return g_tx * g_rx;
}

double sample_shadowing(LinkState state, const BandParams& band, Rng& rng) {
  if (state == LinkState::Outage) throw std::domain_error("sample_shadowing: no shadowing in outage");
  const double sigma = state == LinkState::Los ? band.sigma_los_db : band.sigma_nlos_db;
  if (sigma == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

}  // namespace hetnet
