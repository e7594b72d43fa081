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


#include "experiment.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "log.hpp"
#include "parallel.hpp"

namespace hetnet {

namespace fs = std::filesystem;

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

namespace {

std::string num(double v) { return std::isfinite(v) ? fmt::format("{:.6f}", v) : std::string(); }
std::string gbps(double bps) { return fmt::format("{:.6f}", bps / 1e9); }

void write_file(const fs::path& path, const std::string& text, std::vector<std::string>& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  files.push_back(path.filename().string());
}

void append_manifest(const ExperimentConfig& cfg, const std::string& kind, const std::vector<std::string>& files) {
  nlohmann::ordered_json j;
  j["run_id"] = cfg.run_id;
  j["kind"] = kind;
  j["config_hash"] = hex64(config_hash(cfg));
  j["seed"] = cfg.seed;
  j["version"] = kVersion;
  j["files"] = files;
  std::ofstream out(fs::path(cfg.output_dir) / "manifest.jsonl", std::ios::app);
  if (!out) throw std::runtime_error("cannot append to manifest in '" + cfg.output_dir + "'");
  out << j.dump() << "\n";
}

fs::path prepare_dir(const ExperimentConfig& cfg) {
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

std::string fmt_delta(double d) { return fmt::format("{:.3f}", d); }

}  // namespace

ChannelRealization first_eval_realization(const Scenario& sc, std::uint64_t seed) {
  ChannelSampler sampler(sc.topology, sc.channel, derive_seed(seed, Stream::EvalChannel));
  return sampler.next();
}

OracleResult brute_force_oracle(const Scenario& sc, const ChannelRealization& real) {
  sc.validate();
  const ActionCodec codec(sc.n_sbs(), sc.radio.l_max);
  const std::uint64_t per_agent = codec.size();
  const std::size_t N = sc.n_ue();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < N; ++i) {
    if (total > kOracleLimit / per_agent)
      throw std::length_error("oracle instance too large: more than " + std::to_string(kOracleLimit) +
                              " joint actions");
    total *= per_agent;
  }
  const LinkBudget budget = compute_link_budget(sc.topology, real, sc.channel, sc.radio);
  OracleResult res;
  std::vector<int> joint(N, 0);
  bool have = false;
  for (std::uint64_t k = 0; k < total; ++k) {
    std::uint64_t rest = k;
    for (std::size_t i = 0; i < N; ++i) {
      joint[i] = static_cast<int>(rest % per_agent);
      rest /= per_agent;
    }
    const JointDecision d = decode_joint(codec, joint);
    const ThroughputReport r = evaluate_decision(budget, d, sc.radio);
    ++res.evaluated;
    if (!r.feasible) continue;
    ++res.feasible;
    if (!have || r.total > res.best_total_bps) {
      res.best = d;
      res.best_total_bps = r.total;
      have = true;
    }
  }
  return res;
}

std::string convergence_csv(const TrainLog& log) {
  const std::size_t agents = log.loss.empty() ? 0 : log.loss.front().size();
  std::string s = "episode,mean_throughput_gbps,effective_steps,random_steps,epsilon,mean_loss";
  for (std::size_t a = 0; a < agents; ++a) s += fmt::format(",loss_a{}", a);
  s += "\n";
  for (std::size_t e = 0; e < log.mean_throughput_bps.size(); ++e) {
    double mean = 0.0;
    std::size_t n = 0;
    for (double l : log.loss[e])
      if (std::isfinite(l)) {
        mean += l;
        ++n;
      }
    s += fmt::format("{},{},{},{},{},{}", e, gbps(log.mean_throughput_bps[e]), log.effective_steps[e],
                     log.random_steps[e], num(log.epsilon[e]), n ? num(mean / n) : std::string());
    for (double l : log.loss[e]) s += "," + num(l);
    s += "\n";
  }
  return s;
}

std::string steps_csv(const std::string& run_id, const std::vector<EvalMetrics>& metrics) {
  std::string s = "run_id,scheme,step,total_gbps,effective,beta_sum\n";
  for (const auto& m : metrics)
    for (const auto& st : m.steps)
      s += fmt::format("{},{},{},{},{},{}\n", run_id, m.scheme, st.step, gbps(st.total_bps), st.effective ? 1 : 0,
                       num(st.beta_sum));
  return s;
}

std::string trace_csv(const std::string& run_id, const std::vector<EvalMetrics>& metrics) {
  std::string s = "run_id,scheme,step,state_hash\n";
  for (const auto& m : metrics)
    for (const auto& st : m.steps) s += fmt::format("{},{},{},{}\n", run_id, m.scheme, st.step, hex64(st.state_hash));
  return s;
}

std::string per_sbs_csv(const std::string& run_id, const std::vector<EvalMetrics>& metrics) {
  std::string s = "run_id,scheme,sbs,access_gbps,backhaul_gbps,actual_gbps\n";
  for (const auto& m : metrics) {
    if (m.steps.empty() || m.steps.front().sbs_actual_bps.empty()) continue;
    const std::size_t S = m.steps.front().sbs_actual_bps.size();
    std::vector<double> acc(S, 0.0), bk(S, 0.0), act(S, 0.0);
    for (const auto& st : m.steps)
      for (std::size_t j = 0; j < S; ++j) {
        acc[j] += st.sbs_access_bps[j];
        bk[j] += st.sbs_backhaul_bps[j];
        act[j] += st.sbs_actual_bps[j];
      }
    const double n = static_cast<double>(m.steps.size());
    for (std::size_t j = 0; j < S; ++j)
      s += fmt::format("{},{},{},{},{},{}\n", run_id, m.scheme, j, gbps(acc[j] / n), gbps(bk[j] / n),
                       gbps(act[j] / n));
  }
  return s;
}

std::string summary_csv(const std::string& run_id, std::uint64_t cfg_hash, const std::vector<EvalMetrics>& metrics) {
  std::string s =
      "run_id,scheme,seed,n_steps,mean_total_gbps,effective_steps,effective_ratio,mean_effective_gbps,"
      "mean_beta_sum,trace_hash,config_hash\n";
  for (const auto& m : metrics)
    s += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", run_id, m.scheme, m.seed, m.steps.size(),
                     gbps(m.mean_total_bps), m.effective_count, num(m.effective_ratio()), gbps(m.mean_effective_bps),
                     num(m.mean_beta_sum), hex64(m.trace_hash), hex64(cfg_hash));
  return s;
}

RunResult run_experiment(const ExperimentConfig& cfg, bool write, const PolicySet* policy) {
  cfg.validate();
  const Scenario sc = build_scenario(cfg);
  RunResult res;
  for (Scheme scheme : cfg.schemes) {
    if (scheme != Scheme::Maddqn) {
      res.metrics.push_back(evaluate_baseline(scheme, sc, cfg.eval_steps, cfg.seed));
      continue;
    }
    if (policy) {
      res.policy = *policy;
    } else {
      log_info(fmt::format("training {} agents for {} episodes", sc.n_ue(), cfg.train.episodes));
      TrainResult tr = train(sc, train_config(cfg));
      res.policy = std::move(tr.policy);
      res.log = std::move(tr.log);
    }
    res.metrics.push_back(evaluate(*res.policy, sc, cfg.eval_steps, cfg.seed));
  }
  if (!write) return res;

  const fs::path dir = prepare_dir(cfg);
  const std::string& id = cfg.run_id;
  write_file(dir / (id + "_config.yaml"), dump_config(cfg), res.files);
  write_file(dir / (id + "_topology.yaml"), topology_to_yaml(sc.topology), res.files);
  if (res.log) write_file(dir / (id + "_convergence.csv"), convergence_csv(*res.log), res.files);
  write_file(dir / (id + "_steps.csv"), steps_csv(id, res.metrics), res.files);
  write_file(dir / (id + "_trace.csv"), trace_csv(id, res.metrics), res.files);
  write_file(dir / (id + "_per_sbs.csv"), per_sbs_csv(id, res.metrics), res.files);
  write_file(dir / (id + "_summary.csv"), summary_csv(id, config_hash(cfg), res.metrics), res.files);
  if (res.policy && res.log && cfg.write_checkpoint) {
    save_policy(*res.policy, (dir / (id + "_policy.bin")).string());
    res.files.push_back(id + "_policy.bin");
  }
  append_manifest(cfg, "experiment", res.files);
  return res;
}

std::vector<DeltaPoint> delta_sweep(const ExperimentConfig& cfg, bool write) {
  cfg.validate();
  const Scenario sc = build_scenario(cfg);
  std::vector<DeltaPoint> points(cfg.sweep.deltas.size());
  const int outer = std::min<int>(cfg.train.workers, static_cast<int>(points.size()));
  parallel_for(points.size(), outer, [&](std::size_t k) {
    TrainConfig tc = train_config(cfg);
    tc.delta = cfg.sweep.deltas[k];
    if (outer > 1) tc.workers = 1;
    TrainResult tr = train(sc, tc);
    points[k].delta = tc.delta;
    points[k].metrics = evaluate(tr.policy, sc, cfg.eval_steps, cfg.seed);
    points[k].log = std::move(tr.log);
  });
  if (!write) return points;

  const fs::path dir = prepare_dir(cfg);
  std::vector<std::string> files;
  std::string summary =
      "run_id,delta,n_steps,effective_steps,effective_ratio,mean_effective_gbps,mean_total_gbps,trace_hash\n";
  std::string conv = "run_id,delta,episode,mean_throughput_gbps,effective_steps\n";
  for (const auto& p : points) {
    const auto& m = p.metrics;
    summary += fmt::format("{},{},{},{},{},{},{},{}\n", cfg.run_id, fmt_delta(p.delta), m.steps.size(),
                           m.effective_count, num(m.effective_ratio()), gbps(m.mean_effective_bps),
                           gbps(m.mean_total_bps), hex64(m.trace_hash));
    for (std::size_t e = 0; e < p.log.mean_throughput_bps.size(); ++e)
      conv += fmt::format("{},{},{},{},{}\n", cfg.run_id, fmt_delta(p.delta), e, gbps(p.log.mean_throughput_bps[e]),
                          p.log.effective_steps[e]);
  }
  write_file(dir / (cfg.run_id + "_config.yaml"), dump_config(cfg), files);
  write_file(dir / (cfg.run_id + "_sweep_delta.csv"), summary, files);
  write_file(dir / (cfg.run_id + "_sweep_delta_convergence.csv"), conv, files);
  append_manifest(cfg, "sweep-delta", files);
  return points;
}

int sweep_l_max(const ExperimentConfig& cfg, std::size_t index, std::size_t n_ue) {
  if (!cfg.sweep.l_max_values.empty()) return cfg.sweep.l_max_values.at(index);
  const int L = cfg.radio.n_blocks;
  const int n = static_cast<int>(n_ue);
  int l = static_cast<int>(std::lround(cfg.sweep.l_max_factor * L / n));
  l = std::max(l, (L + n - 1) / n);
  return std::clamp(l, 1, L);
}

namespace {

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, bool write, bool over_ues) {
  const auto& counts = over_ues ? cfg.sweep.ue_counts : cfg.sweep.sbs_counts;
  std::vector<ExperimentConfig> configs;
  std::vector<SweepPoint> points(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    ExperimentConfig c = cfg;
    if (over_ues) {
      c.topology.n_ue = counts[k];
      c.radio.l_max = sweep_l_max(cfg, k, counts[k]);
    } else {
      c.topology.n_sbs = counts[k];
    }
    c.run_id = cfg.run_id + (over_ues ? "_ues" : "_sbs") + std::to_string(counts[k]);
    c.topology.file.clear();
    try {
      c.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("sweep point ") + std::to_string(counts[k]) + ": " + e.what());
    }
    points[k].n_ue = c.topology.n_ue;
    points[k].n_sbs = c.topology.n_sbs;
    points[k].l_max = c.radio.l_max;
    configs.push_back(std::move(c));
  }
  const int outer = std::min<int>(cfg.train.workers, static_cast<int>(points.size()));
  parallel_for(points.size(), outer, [&](std::size_t k) {
    ExperimentConfig c = configs[k];
    if (outer > 1) c.train.workers = 1;
    points[k].metrics = run_experiment(c, false).metrics;
  });
  if (!write) return points;

  const fs::path dir = prepare_dir(cfg);
  std::vector<std::string> files;
  std::string s = "run_id,n_ue,n_sbs,l_max,scheme,mean_total_gbps,effective_ratio,mean_effective_gbps,trace_hash\n";
  for (const auto& p : points)
    for (const auto& m : p.metrics)
      s += fmt::format("{},{},{},{},{},{},{},{},{}\n", cfg.run_id, p.n_ue, p.n_sbs, p.l_max, m.scheme,
                       gbps(m.mean_total_bps), num(m.effective_ratio()), gbps(m.mean_effective_bps),
                       hex64(m.trace_hash));
  write_file(dir / (cfg.run_id + "_config.yaml"), dump_config(cfg), files);
  write_file(dir / (cfg.run_id + (over_ues ? "_sweep_ues.csv" : "_sweep_sbs.csv")), s, files);
  append_manifest(cfg, over_ues ? "sweep-ues" : "sweep-sbs", files);
  return points;
}

}  // namespace

std::vector<SweepPoint> ue_sweep(const ExperimentConfig& cfg, bool write) { return run_sweep(cfg, write, true); }
std::vector<SweepPoint> sbs_sweep(const ExperimentConfig& cfg, bool write) { return run_sweep(cfg, write, false); }

}  // namespace hetnet
