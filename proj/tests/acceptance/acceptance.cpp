// Acceptance gate. One PASS/FAIL line per criterion; exit status 1 on any
// failure. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "baselines.hpp"
#include "config.hpp"
#include "experiment.hpp"
#include "fixtures.hpp"
#include "log.hpp"
#include "oracle.hpp"
#include "qnet.hpp"

using namespace hetnet;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kStateTol = 0.01;
constexpr int kStateDraws = 100000;
constexpr double kStateSeconds = 5.0;
constexpr double kFsplTolDb = 0.05;
constexpr double kSnrTolDb = 1e-6;
constexpr double kGradTol = 1e-4;
constexpr double kGradSeconds = 10.0;
constexpr double kDdqnTol = 1e-12;
constexpr int kExploreDraws = 100000;
constexpr double kExploreSeconds = 30.0;
constexpr double kTinyRatio = 0.95;
constexpr int kTinyEpisodes = 600;
constexpr int kTinySteps = 100;
constexpr double kTinySeconds = 600.0;
constexpr int kDeltaEpisodes = 600;
constexpr int kEvalSteps = 1000;
constexpr double kOrderMargin = 1.03;
constexpr double kOrderSeconds = 3600.0;
constexpr int kRateDecisions = 10000;
constexpr double kRateRelTol = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome channel_statistics() {
  const auto t0 = Clock::now();
  const BlockageParams bp;
  Rng rng(20240101);
  int counts[3] = {0, 0, 0};
  for (int k = 0; k < kStateDraws; ++k) ++counts[static_cast<int>(sample_link_state(100.0, bp, rng))];
  const double expect[3] = {0.1108, 0.7079, 0.1813};
  const oracle::Probs o = oracle::probs(100.0);
  double worst = 0.0;
  for (int s = 0; s < 3; ++s) worst = std::max(worst, std::abs(counts[s] / double(kStateDraws) - expect[s]));
  const bool formula = std::abs(o.los - expect[0]) < 5e-5 && std::abs(o.nlos - expect[1]) < 5e-5 &&
                       std::abs(o.out - expect[2]) < 5e-5;
  const double secs = seconds_since(t0);
  return {worst <= kStateTol && formula && secs < kStateSeconds,
          fmt::format("freq=({:.4f},{:.4f},{:.4f}) max_dev={:.4f} {:.2f}s", counts[0] / double(kStateDraws),
                      counts[1] / double(kStateDraws), counts[2] / double(kStateDraws), worst, secs)};
}

Outcome link_budget() {
  const ChannelParams ch;
  const double f28 = free_space_reference_db(ch.access);
  const double f73 = free_space_reference_db(ch.backhaul);
  const bool fspl = std::abs(f28 - 61.38) <= kFsplTolDb && std::abs(f73 - 69.71) <= kFsplTolDb;

  // SBS 100 m from the MBS, full backhaul band of 100 MHz.
  const Topology t = fixtures::line_topology({100.0}, {150.0});
  const auto real = fixtures::uniform_realization(1, 1);
  const RadioParams radio;
  const LinkBudget b = compute_link_budget(t, real, ch, radio);
  const double rx_dbm = mw_to_dbm(b.backhaul_rx_mw[0]);
  const double snr_db = 10.0 * std::log10(backhaul_snr(b, 0, 100e6));
  const double want_db = oracle::backhaul_snr_db(100.0, 100e6);
  const bool worked = std::abs(rx_dbm + 39.71) < 0.005 && std::abs(snr_db - 54.29) < 0.005 &&
                      std::abs(oracle::noise_dbm(100e6) + 94.0) < 1e-12;
  const bool snr = std::abs(snr_db - want_db) <= kSnrTolDb;
  return {fspl && worked && snr, fmt::format("fspl28={:.4f} fspl73={:.4f} rx={:.5f}dBm snr={:.6f}dB oracle={:.6f}dB",
                                             f28, f73, rx_dbm, snr_db, want_db)};
}

double loss_only(const QNetwork& net, const Matrix& x, std::span<const int> a, const Vector& y) {
  Gradients g = Gradients::zeros_like(net);
  return loss_and_grads(net, x, a, y, g);
}

Outcome gradient_check() {
  const auto t0 = Clock::now();
  Rng rng(9001);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_int_distribution<int> act(0, 4);
  const double h = 1e-5;
  double worst = 0.0;
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
    auto probe = [&](double& p, double analytic) {
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
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) probe(layer.weight(r, c), g.weight[l](r, c));
      for (Eigen::Index r = 0; r < layer.bias.size(); ++r) probe(layer.bias(r), g.bias[l](r));
    }
  }
  const double secs = seconds_since(t0);
  return {worst < kGradTol && secs < kGradSeconds, fmt::format("max_rel_err={:.3e} {:.2f}s", worst, secs)};
}

Outcome ddqn_semantics() {
  Rng rng(77);
  const QNetwork net({9, 16, 12, 26}, rng);
  std::normal_distribution<double> z(0.0, 1.0);
  Batch b;
  const int n = 256;
  b.obs = Matrix(9, n);
  b.next_obs = Matrix(9, n);
  b.rewards = Vector(n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < 9; ++r) {
      b.obs(r, c) = z(rng);
      b.next_obs(r, c) = z(rng);
    }
    b.rewards(c) = z(rng);
    b.actions.push_back(static_cast<int>(rng() % 26));
  }
  const Vector y = ddqn_targets(b, net, net, 0.9);
  const Vector y_dqn = dqn_targets(b, net, 0.9);
  const double diff = (y - y_dqn).cwiseAbs().maxCoeff();

  QNetwork sel = QNetwork::zeros({1, 2});
  QNetwork val = QNetwork::zeros({1, 2});
  sel.layers()[0].bias << 1.0, 3.0;
  val.layers()[0].bias << 5.0, 2.0;
  Batch h;
  h.obs = Matrix::Zero(1, 1);
  h.next_obs = Matrix::Zero(1, 1);
  h.rewards = Vector::Constant(1, 1.0);
  h.actions = {0};
  const double hand = ddqn_targets(h, sel, val, 0.9)(0);
  return {diff <= kDdqnTol && hand == 1.0 + 0.9 * 2.0,
          fmt::format("max|ddqn-dqn|={:.1e} over {} tuples, hand={:.17g}", diff, n, hand)};
}

Outcome exploration_feasibility() {
  const auto t0 = Clock::now();
  ExperimentConfig cfg = full_scale_config();
  const Scenario sc = build_scenario(cfg);
  Environment env(sc, 1);
  Rng rng(4242);
  int bad = 0;
  std::vector<int> load(sc.n_sbs());
  for (int k = 0; k < kExploreDraws; ++k) {
    const auto joint = env.random_feasible_joint_action(rng);
    const auto d = decode_joint(env.codec(), joint);
    int sum = 0;
    std::fill(load.begin(), load.end(), 0);
    for (std::size_t i = 0; i < d.assoc.size(); ++i) {
      sum += d.blocks[i];
      ++load[d.assoc[i]];
      if (d.blocks[i] < 0 || d.blocks[i] > sc.radio.l_max) ++bad;
    }
    if (sum != sc.radio.n_blocks) ++bad;
    for (int v : load)
      if (v > sc.radio.ue_cap) ++bad;
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < kExploreSeconds, fmt::format("violations={} draws={} {:.2f}s", bad, kExploreDraws, secs)};
}

ExperimentConfig tiny_config() {
  ExperimentConfig c = default_config();
  c.run_id = "tiny";
  c.topology.n_sbs = 2;
  c.topology.n_ue = 2;
  c.radio.n_blocks = 4;
  c.radio.l_max = 4;
  c.channel.options.force_los = true;
  c.channel.options.zero_shadowing = true;
  c.channel.options.frozen = true;
  c.train.episodes = kTinyEpisodes;
  c.train.steps = kTinySteps;
  c.eval_steps = kTinySteps;
  c.schemes = {Scheme::Maddqn};
  return c;
}

Outcome tiny_instance() {
  const auto t0 = Clock::now();
  const ExperimentConfig c = tiny_config();
  const Scenario sc = build_scenario(c);
  const OracleResult best = brute_force_oracle(sc, first_eval_realization(sc, c.seed));
  const RunResult r = run_experiment(c, false);
  const double got = r.metrics.front().mean_total_bps;
  const double secs = seconds_since(t0);
  const double ratio = best.best_total_bps > 0 ? got / best.best_total_bps : 0.0;
  return {ratio >= kTinyRatio && secs < kTinySeconds,
          fmt::format("greedy={:.4f}Gbps oracle={:.4f}Gbps ratio={:.4f} ({} joint actions) {:.1f}s", got / 1e9,
                      best.best_total_bps / 1e9, ratio, best.evaluated, secs)};
}

Outcome delta_behavior() {
  const auto t0 = Clock::now();
  ExperimentConfig c = default_config();
  c.run_id = "delta";
  c.train.episodes = kDeltaEpisodes;
  c.eval_steps = kEvalSteps;
  c.schemes = {Scheme::Maddqn};
  c.sweep.deltas = {0.0, 0.2, 1.0};
  const auto points = delta_sweep(c, false);
  std::map<double, const EvalMetrics*> m;
  for (const auto& p : points) m[p.delta] = &p.metrics;
  const double r02 = m[0.2]->effective_ratio();
  const double r1 = m[1.0]->effective_ratio();
  const double e0 = m[0.0]->mean_effective_bps;
  const double e1 = m[1.0]->mean_effective_bps;
  const bool pass = m[0.2]->effective_count == kEvalSteps && r1 < r02 && e1 >= e0;
  return {pass, fmt::format("ratio(0)={:.3f} ratio(0.2)={:.3f} ratio(1)={:.3f} eff_gbps(0)={:.4f} eff_gbps(1)={:.4f} "
                            "{:.1f}s",
                            m[0.0]->effective_ratio(), r02, r1, e0 / 1e9, e1 / 1e9, seconds_since(t0))};
}

Outcome scheme_ordering() {
  const auto t0 = Clock::now();
  const std::vector<Scheme> order{Scheme::Maddqn, Scheme::Hl, Scheme::Sl, Scheme::Da, Scheme::MbsOnly};
  std::vector<double> mean(order.size(), 0.0);
  std::string per_seed;
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  for (std::uint64_t seed : seeds) {
    ExperimentConfig c = default_config();
    c.run_id = "order";
    c.seed = seed;
    c.topology.n_ue = 10;
    c.topology.n_sbs = 6;
    c.eval_steps = kEvalSteps;
    c.schemes = order;
    const RunResult r = run_experiment(c, false);
    per_seed += fmt::format(" s{}:", seed);
    for (std::size_t k = 0; k < order.size(); ++k) {
      mean[k] += r.metrics[k].mean_total_bps / seeds.size();
      per_seed += fmt::format("{:.3f}{}", r.metrics[k].mean_total_bps / 1e9, k + 1 < order.size() ? "/" : "");
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = mean[0] > mean[1] && mean[1] >= mean[2] && mean[2] > mean[3] && mean[3] > mean[4] &&
                    mean[0] >= kOrderMargin * mean[1] && secs < kOrderSeconds;
  return {pass, fmt::format("mean Gbps maddqn={:.4f} hl={:.4f} sl={:.4f} da={:.4f} mbs={:.4f} gain_vs_hl={:+.2f}%{} "
                            "{:.1f}s",
                            mean[0] / 1e9, mean[1] / 1e9, mean[2] / 1e9, mean[3] / 1e9, mean[4] / 1e9,
                            100.0 * (mean[0] / mean[1] - 1.0), per_seed, secs)};
}

bool naive_feasible(const JointDecision& d, std::size_t S, const RadioParams& radio) {
  std::vector<int> load(S, 0);
  int blocks = 0;
  for (std::size_t i = 0; i < d.assoc.size(); ++i) {
    int hits = 0;
    for (std::size_t j = 0; j < S; ++j) hits += d.assoc[i] == static_cast<int>(j);
    if (hits != 1) return false;
    ++load[d.assoc[i]];
    if (d.blocks[i] < 0 || d.blocks[i] > radio.l_max || d.blocks[i] > radio.n_blocks) return false;
    blocks += d.blocks[i];
  }
  if (blocks > radio.n_blocks) return false;
  for (int v : load)
    if (v > radio.ue_cap) return false;
  return true;
}

Outcome rate_law() {
  Rng rng(555);
  ExperimentConfig c = default_config();
  Scenario sc = build_scenario(c);
  sc.radio.ue_cap = 3;
  Environment env(sc, 1);

  // Independent arithmetic on an all-LOS, zero-shadowing channel.
  ChannelParams los = sc.channel;
  los.options.force_los = true;
  los.options.zero_shadowing = true;
  ChannelSampler los_sampler(sc.topology, los, 11);
  ChannelSampler sampler(sc.topology, sc.channel, 12);
  const std::size_t S = sc.n_sbs();
  const std::size_t N = sc.n_ue();
  std::vector<std::vector<double>> sd(S, std::vector<double>(N)), side(S, std::vector<double>(N));
  std::vector<double> md(S);
  for (std::size_t j = 0; j < S; ++j) {
    md[j] = std::max(1.0, sc.topology.mbs_sbs_distance(j));
    for (std::size_t i = 0; i < N; ++i) sd[j][i] = std::max(1.0, sc.topology.sbs_ue_distance(j, i));
  }

  int law = 0, oracle_mismatch = 0, checker = 0, feasible_seen = 0;
  for (int k = 0; k < kRateDecisions; ++k) {
    const auto d = decode_joint(env.codec(), env.random_feasible_joint_action(rng));
    const auto real = sampler.next();
    const auto r = evaluate_decision(sc.topology, real, sc.channel, d, sc.radio);
    for (std::size_t i = 0; i < N; ++i)
      if (r.r_actual[i] != std::min(r.r_access[i], r.r_backhaul[i])) ++law;
    if (r.feasible != naive_feasible(d, S, sc.radio)) ++checker;

    const auto lr = los_sampler.next();
    for (std::size_t j = 0; j < S; ++j)
      for (std::size_t i = 0; i < N; ++i) side[j][i] = lr.unintended_gain[lr.at(j, i)];
    const auto rl = evaluate_decision(sc.topology, lr, los, d, sc.radio);
    const auto o = oracle::rates(sd, md, side, d.assoc, d.blocks, sc.radio.n_blocks);
    for (std::size_t i = 0; i < N; ++i)
      if (std::abs(rl.r_actual[i] - o.actual[i]) > kRateRelTol * std::max(1.0, std::abs(o.actual[i]))) ++oracle_mismatch;

    // Arbitrary (often infeasible) decisions for the constraint checker.
    JointDecision a;
    for (std::size_t i = 0; i < N; ++i) {
      a.assoc.push_back(static_cast<int>(rng() % S));
      a.blocks.push_back(static_cast<int>(rng() % (sc.radio.l_max + 3)) - 1);
    }
    const auto ra = evaluate_decision(sc.topology, real, sc.channel, a, sc.radio);
    const bool naive = naive_feasible(a, S, sc.radio);
    if (ra.feasible != naive) ++checker;
    feasible_seen += naive;
  }
  return {law == 0 && oracle_mismatch == 0 && checker == 0,
          fmt::format("min_law_violations={} oracle_mismatches={} checker_disagreements={} ({} decisions, {} random "
                      "feasible)",
                      law, oracle_mismatch, checker, 2 * kRateDecisions, kRateDecisions + feasible_seen)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto t0 = Clock::now();
  const fs::path root = fs::temp_directory_path() / "hetnet_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> files[2];
  for (int k = 0; k < 2; ++k) {
    ExperimentConfig c = default_config();
    c.run_id = "desk";
    c.output_dir = (root / std::to_string(k)).string();
    for (const auto& f : run_experiment(c).files) files[k].push_back(fs::path(f).filename().string());
  }
  int csv = 0, differ = 0;
  for (const auto& name : files[0]) {
    if (fs::path(name).extension() != ".csv") continue;
    ++csv;
    if (slurp(root / "0" / name) != slurp(root / "1" / name)) ++differ;
  }
  const bool same_sets = files[0] == files[1];
  fs::remove_all(root);
  return {same_sets && csv >= 5 && differ == 0,
          fmt::format("{} CSV files compared, {} differ {:.1f}s", csv, differ, seconds_since(t0))};
}

}  // namespace

int main(int argc, char** argv) {
  set_log_level(LogLevel::Warning);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"channel statistics", channel_statistics},
      {"link budget", link_budget},
      {"gradient correctness", gradient_check},
      {"ddqn semantics", ddqn_semantics},
      {"exploration feasibility", exploration_feasibility},
      {"tiny-instance optimality", tiny_instance},
      {"delta behavior", delta_behavior},
      {"scheme ordering", scheme_ordering},
      {"per-UE rate law", rate_law},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
