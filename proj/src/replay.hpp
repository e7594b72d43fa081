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
#include <span>
#include <vector>

#include "qnet.hpp"
#include "rng.hpp"

namespace hetnet {

struct ReplayTuple {
  std::vector<double> obs;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_obs;
};

/// Fixed-capacity ring buffer of transitions; the oldest entry is
/// overwritten first once full.
class ReplayMemory {
 public:
  ReplayMemory(std::size_t capacity, std::size_t obs_dim);

  void push(std::span<const double> obs, int action, double reward, std::span<const double> next_obs);

  /// Uniform sample of k distinct transitions. Throws if k > size().
  Batch sample(std::size_t k, Rng& rng) const;

  /// Transition by age: 0 is the oldest still stored.
  ReplayTuple at(std::size_t age) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t obs_dim() const { return dim_; }

 private:
  std::size_t slot(std::size_t age) const;

  std::size_t capacity_;
  std::size_t dim_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;  // next slot to write
  std::vector<double> obs_;
  std::vector<double> next_obs_;
  std::vector<int> actions_;
  std::vector<double> rewards_;
};

}  // namespace hetnet
