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


#include "replay.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hetnet {

ReplayMemory::ReplayMemory(std::size_t capacity, std::size_t obs_dim) : capacity_(capacity), dim_(obs_dim) {
  if (capacity == 0 || obs_dim == 0) throw std::invalid_argument("ReplayMemory: capacity and dimension must be positive");
}

void ReplayMemory::push(std::span<const double> obs, int action, double reward, std::span<const double> next_obs) {
  if (obs.size() != dim_ || next_obs.size() != dim_)
    throw std::invalid_argument("ReplayMemory::push: observation size mismatch");
  if (size_ < capacity_) {
    // Still growing: storage is appended lazily so small runs stay small.
    obs_.insert(obs_.end(), obs.begin(), obs.end());
    next_obs_.insert(next_obs_.end(), next_obs.begin(), next_obs.end());
    actions_.push_back(action);
    rewards_.push_back(reward);
    ++size_;
    head_ = size_ % capacity_;
    return;
  }
  std::copy(obs.begin(), obs.end(), obs_.begin() + static_cast<std::ptrdiff_t>(head_ * dim_));
  std::copy(next_obs.begin(), next_obs.end(), next_obs_.begin() + static_cast<std::ptrdiff_t>(head_ * dim_));
  actions_[head_] = action;
  rewards_[head_] = reward;
  head_ = (head_ + 1) % capacity_;
}

std::size_t ReplayMemory::slot(std::size_t age) const {
  if (age >= size_) throw std::out_of_range("ReplayMemory: index " + std::to_string(age) + " out of range");
  return size_ < capacity_ ? age : (head_ + age) % capacity_;
}

ReplayTuple ReplayMemory::at(std::size_t age) const {
  const std::size_t s = slot(age);
  ReplayTuple t;
  t.obs.assign(obs_.begin() + static_cast<std::ptrdiff_t>(s * dim_),
               obs_.begin() + static_cast<std::ptrdiff_t>((s + 1) * dim_));
  t.next_obs.assign(next_obs_.begin() + static_cast<std::ptrdiff_t>(s * dim_),
                    next_obs_.begin() + static_cast<std::ptrdiff_t>((s + 1) * dim_));
  t.action = actions_[s];
  t.reward = rewards_[s];
  return t;
}

Batch ReplayMemory::sample(std::size_t k, Rng& rng) const {
  if (k > size_)
    throw std::invalid_argument("ReplayMemory::sample: requested " + std::to_string(k) + " of " +
                                std::to_string(size_) + " stored transitions");
  std::vector<std::size_t> all(size_);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> picked;
  picked.reserve(k);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), k, rng);
  std::shuffle(picked.begin(), picked.end(), rng);

  Batch b;
  const auto n = static_cast<Eigen::Index>(k);
  const auto d = static_cast<Eigen::Index>(dim_);
  b.obs.resize(d, n);
  b.next_obs.resize(d, n);
  b.rewards.resize(n);
  b.actions.resize(k);
  for (Eigen::Index c = 0; c < n; ++c) {
    const std::size_t s = picked[static_cast<std::size_t>(c)];
    b.obs.col(c) = Eigen::Map<const Vector>(obs_.data() + s * dim_, d);
    b.next_obs.col(c) = Eigen::Map<const Vector>(next_obs_.data() + s * dim_, d);
    b.actions[static_cast<std::size_t>(c)] = actions_[s];
    b.rewards(c) = rewards_[s];
  }
  return b;
}

}  // namespace hetnet
