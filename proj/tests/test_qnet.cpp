#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qnet.hpp"

using namespace hetnet;

namespace {

Batch random_batch(const QNetwork& net, std::size_t n, Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_int_distribution<int> act(0, net.output_size() - 1);
  Batch b;
  b.obs = Matrix(net.input_size(), static_cast<Eigen::Index>(n));
  b.next_obs = Matrix(net.input_size(), static_cast<Eigen::Index>(n));
  b.rewards = Vector(static_cast<Eigen::Index>(n));
  for (Eigen::Index c = 0; c < b.obs.cols(); ++c) {
    for (Eigen::Index r = 0; r < b.obs.rows(); ++r) {
      b.obs(r, c) = z(rng);
      b.next_obs(r, c) = z(rng);
    }
    b.rewards(c) = z(rng);
    b.actions.push_back(act(rng));
  }
  return b;
}

double loss_only(const QNetwork& net, const Matrix& x, std::span<const int> a, const Vector& y) {
  Gradients g = Gradients::zeros_like(net);
  return loss_and_grads(net, x, a, y, g);
}

}  // namespace

TEST_CASE("forward pass") {
  SUBCASE("zero weights") {
    const QNetwork net = QNetwork::zeros({3, 4, 2});
    const std::vector<double> x{1.0, -2.0, 3.0};
    CHECK(net.forward(x).isZero());
  }
  SUBCASE("identity two-layer net") {
    QNetwork net = QNetwork::zeros({2, 2, 2});
    for (auto& l : net.layers()) l.weight = Matrix::Identity(2, 2);
    const std::vector<double> x{1.0, -1.0};
    const Vector q = net.forward(x);
    CHECK(q(0) == 1.0);
    CHECK(q(1) == 0.0);
  }
  SUBCASE("positive homogeneity with zero biases") {
    Rng rng(1);
    const QNetwork net({4, 6, 3}, rng);
    const std::vector<double> x{0.3, 1.2, 0.7, 2.0};
    std::vector<double> kx(x);
    for (double& v : kx) v *= 2.5;
    CHECK(net.forward(kx).isApprox(2.5 * net.forward(x), 1e-12));
  }
  SUBCASE("batch equals per-sample") {
    Rng rng(2);
    const QNetwork net({5, 7, 4}, rng);
    Matrix xs = Matrix::Random(5, 9);
    const Matrix q = net.forward_batch(xs);
    for (Eigen::Index c = 0; c < xs.cols(); ++c) {
      std::vector<double> col(xs.col(c).data(), xs.col(c).data() + 5);
      CHECK(q.col(c).isApprox(net.forward(col), 1e-12));
    }
  }
  SUBCASE("shape mismatch") {
    Rng rng(3);
    const QNetwork net({3, 2}, rng);
    const std::vector<double> x{1.0, 2.0};
    CHECK_THROWS_AS(net.forward(x), std::invalid_argument);
  }
  SUBCASE("initialization bounds") {
    Rng rng(4);
    const QNetwork net({11, 400, 350, 300, 78}, rng);
    CHECK(net.parameter_count() == 11 * 400 + 400 + 400 * 350 + 350 + 350 * 300 + 300 + 300 * 78 + 78);
    for (const auto& l : net.layers()) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(l.weight.cols()));
      CHECK(l.weight.cwiseAbs().maxCoeff() <= bound);
      CHECK(l.bias.isZero());
    }
  }
}

TEST_CASE("argmax breaks ties towards the lowest index") {
  const std::vector<double> flat{2.0, 2.0, 2.0};
  CHECK(argmax(flat) == 0);
  const std::vector<double> q{0.1, 0.9, 0.3};
  CHECK(argmax(q) == 1);
  const std::vector<double> shifted{5.1, 5.9, 5.3};
  CHECK(argmax(shifted) == 1);
}

TEST_CASE("ddqn targets") {
  Rng rng(8);
  const QNetwork online({4, 8, 3}, rng);
  const QNetwork target({4, 8, 3}, rng);
  const Batch b = random_batch(online, 32, rng);

  SUBCASE("gamma zero gives the rewards") { CHECK(ddqn_targets(b, online, target, 0.0).isApprox(b.rewards)); }
  SUBCASE("equal networks reduce to the max target") {
    CHECK(ddqn_targets(b, online, online, 0.9).isApprox(dqn_targets(b, online, 0.9), 1e-14));
  }
  SUBCASE("hand example") {
    QNetwork sel = QNetwork::zeros({1, 2});
    QNetwork val = QNetwork::zeros({1, 2});
    sel.layers()[0].bias << 1.0, 3.0;
    val.layers()[0].bias << 5.0, 2.0;
    Batch h;
    h.obs = Matrix::Zero(1, 1);
    h.next_obs = Matrix::Zero(1, 1);
    h.rewards = Vector::Constant(1, 1.0);
    h.actions = {0};
    CHECK(ddqn_targets(h, sel, val, 0.9)(0) == doctest::Approx(2.8).epsilon(1e-15));
    CHECK(dqn_targets(h, val, 0.9)(0) == doctest::Approx(5.5));
  }
  SUBCASE("batch order does not matter") {
    Batch rev = b;
    const auto n = static_cast<Eigen::Index>(b.size());
    for (Eigen::Index c = 0; c < n; ++c) {
      rev.obs.col(c) = b.obs.col(n - 1 - c);
      rev.next_obs.col(c) = b.next_obs.col(n - 1 - c);
      rev.rewards(c) = b.rewards(n - 1 - c);
      rev.actions[c] = b.actions[n - 1 - c];
    }
    const Vector y = ddqn_targets(b, online, target, 0.9);
    const Vector yr = ddqn_targets(rev, online, target, 0.9);
    for (Eigen::Index c = 0; c < n; ++c) CHECK(yr(c) == y(n - 1 - c));
  }
  SUBCASE("gamma outside [0, 1)") { CHECK_THROWS_AS(ddqn_targets(b, online, target, 1.0), std::invalid_argument); }
}

TEST_CASE("loss and gradients") {
  SUBCASE("targets equal to predictions") {
    Rng rng(5);
    const QNetwork net({3, 5, 4}, rng);
    Batch b = random_batch(net, 6, rng);
    const Matrix q = net.forward_batch(b.obs);
    Vector y(6);
    for (int c = 0; c < 6; ++c) y(c) = q(b.actions[c], c);
    Gradients g = Gradients::zeros_like(net);
    CHECK(loss_and_grads(net, b.obs, b.actions, y, g) == doctest::Approx(0.0));
    CHECK(g.squared_norm() == doctest::Approx(0.0));
  }
  SUBCASE("scalar linear net") {
    QNetwork net = QNetwork::zeros({1, 1});
    net.layers()[0].weight(0, 0) = 0.7;
    net.layers()[0].bias(0) = 0.2;
    Matrix x = Matrix::Constant(1, 1, 3.0);
    Vector y = Vector::Constant(1, 1.0);
    const std::vector<int> a{0};
    Gradients g = Gradients::zeros_like(net);
    const double q = 0.7 * 3.0 + 0.2;
    CHECK(loss_and_grads(net, x, a, y, g) == doctest::Approx((q - 1.0) * (q - 1.0)));
    CHECK(g.weight[0](0, 0) == doctest::Approx(2.0 * (q - 1.0) * 3.0));
    CHECK(g.bias[0](0) == doctest::Approx(2.0 * (q - 1.0)));
  }
}

TEST_CASE("gradient check against central differences") {
  Rng rng(123);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_int_distribution<int> act(0, 4);
  double worst = 0.0;
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    QNetwork net({6, 8, 5}, rng);
    for (auto& l : net.layers())
      for (Eigen::Index k = 0; k < l.bias.size(); ++k) l.bias(k) = 0.1 * z(rng);
    Matrix x(6, 1);
    for (int r = 0; r < 6; ++r) x(r, 0) = z(rng);
    const std::vector<int> a{act(rng)};
    const Vector y = Vector::Constant(1, z(rng));
    Gradients g = Gradients::zeros_like(net);
    loss_and_grads(net, x, a, y, g);

    auto check_param = [&](double& p, double analytic) {
      const double saved = p;
      p = saved + h;
      const double up = loss_only(net, x, a, y);
      p = saved - h;
      const double down = loss_only(net, x, a, y);
      p = saved;
      const double numeric = (up - down) / (2 * h);
      const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
      worst = std::max(worst, std::abs(numeric - analytic) / scale);
    };
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
      auto& layer = net.layers()[l];
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) check_param(layer.weight(r, c), g.weight[l](r, c));
      for (Eigen::Index r = 0; r < layer.bias.size(); ++r) check_param(layer.bias(r), g.bias[l](r));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("rmsprop") {
  Rng rng(6);
  SUBCASE("zero gradient leaves parameters unchanged") {
    QNetwork net({3, 4, 2}, rng);
    const QNetwork before = net;
    RmsProp opt(net, {});
    opt.step(net, Gradients::zeros_like(net));
    CHECK(net == before);
  }
  SUBCASE("first step against a scripted update") {
    QNetwork net = QNetwork::zeros({1, 1});
    RmsProp opt(net, {1e-3, 0.99, 1e-8, 0.0});
    Gradients g = Gradients::zeros_like(net);
    g.weight[0](0, 0) = 0.5;
    g.bias[0](0) = -2.0;
    opt.step(net, g);
    const double v_w = 0.01 * 0.25;
    const double v_b = 0.01 * 4.0;
    CHECK(net.layers()[0].weight(0, 0) == doctest::Approx(-1e-3 * 0.5 / (std::sqrt(v_w) + 1e-8)).epsilon(1e-12));
    CHECK(net.layers()[0].bias(0) == doctest::Approx(1e-3 * 2.0 / (std::sqrt(v_b) + 1e-8)).epsilon(1e-12));
  }
  SUBCASE("repeated identical gradients approach lr") {
    QNetwork net = QNetwork::zeros({1, 1});
    RmsProp opt(net, {1e-3, 0.99, 1e-8, 0.0});
    Gradients g = Gradients::zeros_like(net);
    g.weight[0](0, 0) = 0.3;
    double last = 0.0;
    for (int k = 0; k < 3000; ++k) {
      const double before = net.layers()[0].weight(0, 0);
      opt.step(net, g);
      last = before - net.layers()[0].weight(0, 0);
    }
    CHECK(last == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK(opt.accumulator().weight[0](0, 0) >= 0.0);
  }
  SUBCASE("frozen regression batch: loss decreases for 50 steps") {
    QNetwork net({4, 16, 3}, rng);
    RmsProp opt(net, {});
    const Batch b = random_batch(net, 64, rng);
    const Vector y = b.rewards;
    Gradients g = Gradients::zeros_like(net);
    double prev = loss_and_grads(net, b.obs, b.actions, y, g);
    for (int k = 0; k < 50; ++k) {
      opt.step(net, g);
      const double now = loss_and_grads(net, b.obs, b.actions, y, g);
      CHECK(now < prev);
      prev = now;
    }
  }
}

TEST_CASE("target sync") {
  Rng rng(9);
  QNetwork online({3, 5, 2}, rng);
  QNetwork target({3, 5, 2}, rng);
  sync_target(online, target);
  CHECK(online == target);
  const std::vector<double> x{0.2, -0.4, 1.0};
  CHECK(online.forward(x) == target.forward(x));
  RmsProp opt(online, {});
  const Batch b = random_batch(online, 8, rng);
  Gradients g = Gradients::zeros_like(online);
  loss_and_grads(online, b.obs, b.actions, b.rewards, g);
  opt.step(online, g);
  CHECK_FALSE(online == target);
}

TEST_CASE("checkpoint round trip") {
  Rng rng(10);
  PolicySet p;
  p.networks.emplace_back(std::vector<int>{5, 7, 3}, rng);
  p.networks.emplace_back(std::vector<int>{5, 4, 4, 3}, rng);
  p.episode_fingerprint = 0.9983;
  p.epsilon = 0.002;
  const auto path = (std::filesystem::temp_directory_path() / "hetnet_ckpt_test.bin").string();
  save_policy(p, path);
  const PolicySet q = load_policy(path);
  REQUIRE(q.networks.size() == 2);
  CHECK(q.networks[0] == p.networks[0]);
  CHECK(q.networks[1] == p.networks[1]);
  CHECK(q.episode_fingerprint == p.episode_fingerprint);
  CHECK(q.epsilon == p.epsilon);
  {
    std::ofstream bad(path, std::ios::binary);
    bad << "garbage";
  }
  CHECK_THROWS(load_policy(path));
  std::filesystem::remove(path);
}
