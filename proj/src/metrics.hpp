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
#include <string>
#include <vector>

namespace hetnet {

struct StepRecord {
  int step = 0;
  double total_bps = 0.0;  // 0 for ineffective decisions
  bool effective = false;
  double beta_sum = 0.0;
  std::uint64_t state_hash = 0;
  std::vector<double> sbs_access_bps;
  std::vector<double> sbs_backhaul_bps;
  std::vector<double> sbs_actual_bps;
};

/// Evaluation of one scheme over a channel trace.
struct EvalMetrics {
  std::string scheme;
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  int effective_count = 0;
  double mean_total_bps = 0.0;
  double mean_effective_bps = 0.0;  // over effective steps only
  double mean_beta_sum = 0.0;
  std::uint64_t trace_hash = 0;

  double effective_ratio() const {
    return steps.empty() ? 0.0 : static_cast<double>(effective_count) / static_cast<double>(steps.size());
  }
};

/// Fills the aggregate fields from `steps`.
void finalize(EvalMetrics& m);

}  // namespace hetnet
