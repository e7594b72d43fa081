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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rng.hpp"

namespace hetnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
};

/// Fully connected network with ReLU hidden layers and a linear output layer.
/// Batched entry points take one sample per column.
class QNetwork {
 public:
  QNetwork() = default;

  /// sizes = {in, hidden..., out}. Weights uniform in +-1/sqrt(fan_in), biases 0.
  QNetwork(const std::vector<int>& sizes, Rng& rng);
  static QNetwork zeros(const std::vector<int>& sizes);

  Vector forward(std::span<const double> input) const;
  Matrix forward_batch(const Matrix& inputs) const;

  std::vector<int> sizes() const;
  int input_size() const;
  int output_size() const;
  std::size_t parameter_count() const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  bool all_finite() const;
  friend bool operator==(const QNetwork& a, const QNetwork& b);

 private:
  std::vector<DenseLayer> layers_;
};

struct Gradients {
  std::vector<Matrix> weight;
  std::vector<Vector> bias;

  static Gradients zeros_like(const QNetwork& net);
  double squared_norm() const;
  void scale(double factor);
};

/// Columns of obs / next_obs are samples.
struct Batch {
  Matrix obs;
  std::vector<int> actions;
  Vector rewards;
  Matrix next_obs;

  std::size_t size() const { return actions.size(); }
};

/// Lowest index wins ties.
int argmax(std::span<const double> values);
int argmax(const Vector& values);

/// y = r + gamma Q(s', argmax_a Q(s', a; online); target). No terminal masking.
Vector ddqn_targets(const Batch& batch, const QNetwork& online, const QNetwork& target, double gamma);

/// y = r + gamma max_a Q(s', a; target).
Vector dqn_targets(const Batch& batch, const QNetwork& target, double gamma);

/// loss = sum_b (y_b - Q(s_b, a_b))^2; gradients flow only through the taken
/// action's output. `grads` is overwritten.
double loss_and_grads(const QNetwork& net, const Matrix& obs, std::span<const int> actions, const Vector& targets,
                      Gradients& grads);

struct RmsPropConfig {
  double learning_rate = 1e-4;
  double decay = 0.99;
  double epsilon = 1e-8;
  double clip_norm = 0.0;  // global gradient-norm clip, 0 disables
};

/// v <- rho v + (1 - rho) g^2;  p <- p - lr g / (sqrt(v) + eps)
class RmsProp {
 public:
  RmsProp() = default;
  RmsProp(const QNetwork& net, RmsPropConfig cfg);

  void step(QNetwork& net, Gradients grads);

  const RmsPropConfig& config() const { return cfg_; }
  const Gradients& accumulator() const { return sq_; }

 private:
  RmsPropConfig cfg_;
  Gradients sq_;
};

/// Hard copy of the online parameters into the target network.
void sync_target(const QNetwork& online, QNetwork& target);

/// Trained per-agent policies plus the fingerprint they act with.
struct PolicySet {
  std::vector<QNetwork> networks;
  double episode_fingerprint = 0.0;
  double epsilon = 0.0;
};

// Checkpoint layout (little-endian):
//   char[8]  "HNQNET\0\0"
//   u32      version (1)
//   u32      number of networks
//   f64      episode fingerprint, f64 epsilon
//   per network:
//     u32 n_sizes, u32 sizes[n_sizes]
//     per layer: f64 weight[out * in] row-major, f64 bias[out]
void save_policy(const PolicySet& policy, const std::string& path);
PolicySet load_policy(const std::string& path);

}  // namespace hetnet
