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


#include "metrics.hpp"

#include "realization.hpp"

namespace hetnet {

void finalize(EvalMetrics& m) {
  m.effective_count = 0;
  m.mean_total_bps = 0.0;
  m.mean_effective_bps = 0.0;
  m.mean_beta_sum = 0.0;
  m.trace_hash = 0;
  double effective_sum = 0.0;
  for (const auto& s : m.steps) {
    m.mean_total_bps += s.total_bps;
    m.mean_beta_sum += s.beta_sum;
    m.trace_hash = combine_hash(m.trace_hash, s.state_hash);
    if (s.effective) {
      ++m.effective_count;
      effective_sum += s.total_bps;
    }
  }
  if (!m.steps.empty()) {
    m.mean_total_bps /= static_cast<double>(m.steps.size());
    m.mean_beta_sum /= static_cast<double>(m.steps.size());
  }
  if (m.effective_count > 0) m.mean_effective_bps = effective_sum / m.effective_count;
}

}  // namespace hetnet
