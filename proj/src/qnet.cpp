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


#include "qnet.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hetnet {

namespace {

void check_sizes(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("QNetwork: need at least input and output sizes");
  for (int s : sizes)
    if (s < 1) throw std::invalid_argument("QNetwork: layer sizes must be positive");
}

Matrix relu(const Matrix& m) { return m.cwiseMax(0.0); }

}  // namespace

QNetwork::QNetwork(const std::vector<int>& sizes, Rng& rng) {
  check_sizes(sizes);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> unif(-bound, bound);
    DenseLayer layer{Matrix(out, in), Vector::Zero(out)};
    // Fill row-major so the draw order matches the checkpoint layout.
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < in; ++c) layer.weight(r, c) = unif(rng);
    layers_.push_back(std::move(layer));
  }
}

QNetwork QNetwork::zeros(const std::vector<int>& sizes) {
  check_sizes(sizes);
  QNetwork net;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    net.layers_.push_back({Matrix::Zero(sizes[l + 1], sizes[l]), Vector::Zero(sizes[l + 1])});
  return net;
}

Vector QNetwork::forward(std::span<const double> input) const {
  if (static_cast<int>(input.size()) != input_size())
    throw std::invalid_argument("QNetwork::forward: input size " + std::to_string(input.size()) + ", expected " +
                                std::to_string(input_size()));
  Vector h = Eigen::Map<const Vector>(input.data(), static_cast<Eigen::Index>(input.size()));
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Vector z = layers_[l].weight * h + layers_[l].bias;
    h = l + 1 < layers_.size() ? Vector(z.cwiseMax(0.0)) : z;
  }
  return h;
}

Matrix QNetwork::forward_batch(const Matrix& inputs) const {
  if (inputs.rows() != input_size()) throw std::invalid_argument("QNetwork::forward_batch: input size mismatch");
  Matrix h = inputs;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = layers_[l].weight * h;
    z.colwise() += layers_[l].bias;
    h = l + 1 < layers_.size() ? relu(z) : std::move(z);
  }
  return h;
}

std::vector<int> QNetwork::sizes() const {
  std::vector<int> s;
  if (layers_.empty()) return s;
  s.push_back(static_cast<int>(layers_.front().weight.cols()));
  for (const auto& l : layers_) s.push_back(static_cast<int>(l.weight.rows()));
  return s;
}

int QNetwork::input_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols()); }
int QNetwork::output_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows()); }

std::size_t QNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

bool QNetwork::all_finite() const {
  return std::all_of(layers_.begin(), layers_.end(),
                     [](const DenseLayer& l) { return l.weight.allFinite() && l.bias.allFinite(); });
}

bool operator==(const QNetwork& a, const QNetwork& b) {
  if (a.layers_.size() != b.layers_.size()) return false;
  for (std::size_t l = 0; l < a.layers_.size(); ++l) {
    const auto& x = a.layers_[l];
    const auto& y = b.layers_[l];
    if (x.weight.rows() != y.weight.rows() || x.weight.cols() != y.weight.cols()) return false;
    if (x.weight != y.weight || x.bias != y.bias) return false;
  }
  return true;
}

Gradients Gradients::zeros_like(const QNetwork& net) {
  Gradients g;
  for (const auto& l : net.layers()) {
    g.weight.push_back(Matrix::Zero(l.weight.rows(), l.weight.cols()));
    g.bias.push_back(Vector::Zero(l.bias.size()));
  }
  return g;
}

double Gradients::squared_norm() const {
  double s = 0.0;
  for (const auto& w : weight) s += w.squaredNorm();
  for (const auto& b : bias) s += b.squaredNorm();
  return s;
}

void Gradients::scale(double factor) {
  for (auto& w : weight) w *= factor;
  for (auto& b : bias) b *= factor;
}

int argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty range");
  int best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  return best;
}

int argmax(const Vector& values) { return argmax(std::span<const double>(values.data(), values.size())); }

Vector ddqn_targets(const Batch& batch, const QNetwork& online, const QNetwork& target, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("ddqn_targets: gamma must be in [0, 1)");
  const Eigen::Index n = static_cast<Eigen::Index>(batch.size());
  Vector y = batch.rewards;
  if (gamma == 0.0) return y;
  const Matrix q_online = online.forward_batch(batch.next_obs);
  const Matrix q_target = target.forward_batch(batch.next_obs);
  for (Eigen::Index b = 0; b < n; ++b) {
    const int a = argmax(std::span<const double>(q_online.col(b).data(), static_cast<std::size_t>(q_online.rows())));
    y(b) += gamma * q_target(a, b);
  }
  return y;
}

Vector dqn_targets(const Batch& batch, const QNetwork& target, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("dqn_targets: gamma must be in [0, 1)");
  Vector y = batch.rewards;
  if (gamma == 0.0) return y;
  const Matrix q = target.forward_batch(batch.next_obs);
  for (Eigen::Index b = 0; b < q.cols(); ++b) y(b) += gamma * q.col(b).maxCoeff();
  return y;
}

double loss_and_grads(const QNetwork& net, const Matrix& obs, std::span<const int> actions, const Vector& targets,
                      Gradients& grads) {
  const auto& layers = net.layers();
  const std::size_t L = layers.size();
  const Eigen::Index n = obs.cols();
  if (static_cast<std::size_t>(n) != actions.size() || targets.size() != n)
    throw std::invalid_argument("loss_and_grads: batch, actions and targets disagree in size");

  // Forward, keeping every layer's activations.
  std::vector<Matrix> act;
  act.reserve(L + 1);
  act.push_back(obs);
  for (std::size_t l = 0; l < L; ++l) {
    Matrix z = layers[l].weight * act.back();
    z.colwise() += layers[l].bias;
    act.push_back(l + 1 < L ? relu(z) : std::move(z));
  }

  const Matrix& q = act.back();
  Matrix delta = Matrix::Zero(q.rows(), n);
  double loss = 0.0;
  for (Eigen::Index b = 0; b < n; ++b) {
    const int a = actions[static_cast<std::size_t>(b)];
    if (a < 0 || a >= q.rows()) throw std::out_of_range("loss_and_grads: action index out of range");
    const double err = q(a, b) - targets(b);
    loss += err * err;
    delta(a, b) = 2.0 * err;
  }

  grads = Gradients::zeros_like(net);
  for (std::size_t l = L; l-- > 0;) {
    grads.weight[l].noalias() = delta * act[l].transpose();
    grads.bias[l] = delta.rowwise().sum();
    if (l == 0) break;
    Matrix back = layers[l].weight.transpose() * delta;
    // ReLU derivative: pass where the activation was positive.
    delta = back.cwiseProduct((act[l].array() > 0.0).cast<double>().matrix());
  }
  return loss;
}

RmsProp::RmsProp(const QNetwork& net, RmsPropConfig cfg) : cfg_(cfg), sq_(Gradients::zeros_like(net)) {
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("RMSProp: learning rate must be positive");
  if (!(cfg.decay >= 0.0 && cfg.decay < 1.0)) throw std::invalid_argument("RMSProp: decay must be in [0, 1)");
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("RMSProp: epsilon must be positive");
}

void RmsProp::step(QNetwork& net, Gradients grads) {
  auto& layers = net.layers();
  if (grads.weight.size() != layers.size() || sq_.weight.size() != layers.size())
    throw std::invalid_argument("RMSProp: gradient shapes do not match the network");
  if (cfg_.clip_norm > 0.0) {
    const double norm = std::sqrt(grads.squared_norm());
    if (norm > cfg_.clip_norm) grads.scale(cfg_.clip_norm / norm);
  }
  const double rho = cfg_.decay;
  const double lr = cfg_.learning_rate;
  const double eps = cfg_.epsilon;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    sq_.weight[l] = rho * sq_.weight[l] + (1.0 - rho) * grads.weight[l].cwiseAbs2();
    sq_.bias[l] = rho * sq_.bias[l] + (1.0 - rho) * grads.bias[l].cwiseAbs2();
    layers[l].weight.array() -= lr * grads.weight[l].array() / (sq_.weight[l].array().sqrt() + eps);
    layers[l].bias.array() -= lr * grads.bias[l].array() / (sq_.bias[l].array().sqrt() + eps);
  }
}

void sync_target(const QNetwork& online, QNetwork& target) { target = online; }

namespace {

constexpr std::array<char, 8> kMagic{'H', 'N', 'Q', 'N', 'E', 'T', '\0', '\0'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: unexpected end of file");
  return v;
}

}  // namespace

void save_policy(const PolicySet& policy, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(policy.networks.size()));
  put<double>(out, policy.episode_fingerprint);
  put<double>(out, policy.epsilon);
  for (const auto& net : policy.networks) {
    const auto sizes = net.sizes();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(sizes.size()));
    for (int s : sizes) put<std::uint32_t>(out, static_cast<std::uint32_t>(s));
    for (const auto& layer : net.layers()) {
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) put<double>(out, layer.weight(r, c));
      for (Eigen::Index r = 0; r < layer.bias.size(); ++r) put<double>(out, layer.bias(r));
    }
  }
  if (!out) throw std::runtime_error("failed writing checkpoint " + path);
}

PolicySet load_policy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("checkpoint: bad magic in " + path);
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  const auto n = get<std::uint32_t>(in);
  PolicySet p;
  p.episode_fingerprint = get<double>(in);
  p.epsilon = get<double>(in);
  for (std::uint32_t k = 0; k < n; ++k) {
    const auto n_sizes = get<std::uint32_t>(in);
    if (n_sizes < 2 || n_sizes > 64) throw std::runtime_error("checkpoint: implausible layer count");
    std::vector<int> sizes(n_sizes);
    for (auto& s : sizes) {
      s = static_cast<int>(get<std::uint32_t>(in));
      if (s < 1 || s > (1 << 20)) throw std::runtime_error("checkpoint: implausible layer size");
    }
    QNetwork net = QNetwork::zeros(sizes);
    for (auto& layer : net.layers()) {
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = get<double>(in);
      for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = get<double>(in);
    }
    p.networks.push_back(std::move(net));
  }
  return p;
}

}  // namespace hetnet
