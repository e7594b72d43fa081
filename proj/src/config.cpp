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


#include "config.hpp"

#include <fmt/core.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "log.hpp"

namespace hetnet {

ConfigError::ConfigError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

bool ExperimentConfig::has_scheme(Scheme s) const {
  return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

void ExperimentConfig::validate() const {
  if (topology.file.empty()) {
    if (topology.n_sbs == 0) throw ConfigError("topology.n_sbs must be positive");
    if (topology.n_ue == 0) throw ConfigError("topology.n_ue must be positive");
    if (!(topology.radius_m >= 0.0)) throw ConfigError("topology.radius_m must be non-negative");
  }
  if (eval_steps <= 0) throw ConfigError("eval_steps must be positive");
  if (schemes.empty()) throw ConfigError("schemes must not be empty");
  if (run_id.empty()) throw ConfigError("run_id must not be empty");
  channel.validate();
  radio.validate();
  train.validate();
  if (!(observation.rate_scale_bps > 0.0)) throw ConfigError("observation.rate_scale_bps must be positive");
  if (has_scheme(Scheme::Maddqn) && topology.file.empty()) {
    const auto n = static_cast<long long>(topology.n_ue);
    if (n * radio.l_max < radio.n_blocks)
      throw ConfigError("random exploration is infeasible: n_ue * l_max = " + std::to_string(n * radio.l_max) +
                        " < n_blocks = " + std::to_string(radio.n_blocks));
    if (n > static_cast<long long>(topology.n_sbs) * radio.ue_cap)
      throw ConfigError("random exploration is infeasible: n_ue exceeds n_sbs * ue_cap");
  }
  for (double d : sweep.deltas)
    if (d < 0.0 || d > 1.0) throw ConfigError("sweep.deltas entries must lie in [0, 1]");
  if (!sweep.l_max_values.empty() && sweep.l_max_values.size() != sweep.ue_counts.size())
    throw ConfigError("sweep.l_max_values must be empty or match sweep.ue_counts");
  if (!(sweep.l_max_factor > 0.0)) throw ConfigError("sweep.l_max_factor must be positive");
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.radio.n_blocks = 60;
  c.radio.l_max = 12;
  c.train.episodes = 600;
  c.train.steps = 200;
  return c;
}

ExperimentConfig full_scale_config() {
  ExperimentConfig c;
  c.topology.n_sbs = 20;
  c.topology.n_ue = 30;
  c.topology.radius_m = 200.0;
  c.radio.n_blocks = 300;
  c.radio.l_max = 12;
  c.train.episodes = 3000;
  c.train.steps = 1000;
  c.sweep.ue_counts = {20, 25, 30, 35, 40};
  c.sweep.l_max_values = {18, 15, 12, 10, 9};
  c.sweep.sbs_counts = {10, 15, 20, 25, 30};
  return c;
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

// Walks one mapping, reading known keys and rejecting the rest.
class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      throw ConfigError(label() + " must be a mapping", line_of(node_));
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    if (!node_ || node_.IsNull()) return;
    const YAML::Node v = node_[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(qualified(key) + ": cannot convert '" + describe(v) + "' to " + type_name<T>(), line_of(v));
    }
  }

  void read_optional(const std::string& key, std::optional<double>& out) {
    seen_.insert(key);
    if (!node_ || node_.IsNull()) return;
    const YAML::Node v = node_[key];
    if (!v) return;
    if (v.IsNull()) {
      out.reset();
      return;
    }
    double x = 0.0;
    read(key, x);
    out = x;
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(node_ && !node_.IsNull() ? node_[key] : YAML::Node(), qualified(key));
  }

  /// Runs a validator and re-throws its failure at this section's line.
  void check(const std::function<void()>& validator) const {
    try {
      validator();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(label() + ": " + e.what(), line_of(node_));
    }
  }

  void finish() const {
    if (!node_ || node_.IsNull()) return;
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      const std::string k = it->first.as<std::string>();
      if (!seen_.count(k)) throw ConfigError("unknown key '" + qualified(k) + "'", line_of(it->first));
    }
  }

  int line() const { return line_of(node_); }

 private:
  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string label() const { return path_.empty() ? "config" : path_; }

  static std::string describe(const YAML::Node& v) {
    if (v.IsScalar()) return v.Scalar();
    if (v.IsSequence()) return "<sequence>";
    if (v.IsMap()) return "<mapping>";
    return "<null>";
  }

  template <typename T>
  static std::string type_name() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else return "a list";
  }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

constexpr double kDegree = kPi / 180.0;

void read_band(Section s, BandParams& b) {
  s.read("carrier_hz", b.carrier_hz);
  s.read("exp_los", b.exp_los);
  s.read("exp_nlos", b.exp_nlos);
  s.read("sigma_los_db", b.sigma_los_db);
  s.read("sigma_nlos_db", b.sigma_nlos_db);
  s.read("ref_distance_m", b.ref_distance_m);
  s.finish();
  s.check([&] { b.validate(); });
}

void read_antenna(Section s, AntennaPattern& a) {
  double deg = a.beamwidth_rad / kDegree;
  s.read("main_gain_db", a.main_gain_db);
  s.read("side_gain_db", a.side_gain_db);
  s.read("beamwidth_deg", deg);
  a.beamwidth_rad = deg * kDegree;
  s.finish();
  s.check([&] { a.validate(); });
}

ExperimentConfig from_node(const YAML::Node& root) {
  ExperimentConfig c = default_config();
  Section top(root, "");
  top.read("seed", c.seed);
  top.read("run_id", c.run_id);
  top.read("output_dir", c.output_dir);
  top.read("eval_steps", c.eval_steps);
  top.read("write_checkpoint", c.write_checkpoint);
  {
    std::vector<std::string> names;
    for (Scheme s : c.schemes) names.push_back(to_string(s));
    top.read("schemes", names);
    c.schemes.clear();
    for (const auto& n : names) {
      try {
        c.schemes.push_back(parse_scheme(n));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), line_of(root["schemes"]));
      }
    }
  }

  Section topo = top.child("topology");
  topo.read("n_sbs", c.topology.n_sbs);
  topo.read("n_ue", c.topology.n_ue);
  topo.read("radius_m", c.topology.radius_m);
  topo.read("file", c.topology.file);
  topo.finish();

  Section radio = top.child("radio");
  radio.read("p_sbs_dbm", c.radio.p_sbs_dbm);
  radio.read("p_mbs_dbm", c.radio.p_mbs_dbm);
  radio.read("w_access_hz", c.radio.w_access_hz);
  radio.read("w_backhaul_hz", c.radio.w_backhaul_hz);
  radio.read("n0_dbm_per_mhz", c.radio.n0_dbm_per_mhz);
  radio.read("n_blocks", c.radio.n_blocks);
  radio.read("l_max", c.radio.l_max);
  radio.read("ue_cap", c.radio.ue_cap);
  radio.finish();
  radio.check([&] { c.radio.validate(); });

  Section chan = top.child("channel");
  read_band(chan.child("access"), c.channel.access);
  read_band(chan.child("backhaul"), c.channel.backhaul);
  {
    Section b = chan.child("blockage");
    b.read("a_los", c.channel.blockage.a_los);
    b.read("a_out", c.channel.blockage.a_out);
    b.read("b_out", c.channel.blockage.b_out);
    b.finish();
    b.check([&] { c.channel.blockage.validate(); });
  }
  {
    Section a = chan.child("antennas");
    read_antenna(a.child("mbs"), c.channel.antennas.mbs);
    read_antenna(a.child("sbs"), c.channel.antennas.sbs);
    read_antenna(a.child("ue"), c.channel.antennas.ue);
    a.finish();
  }
  {
    Section o = chan.child("options");
    o.read("shadowing_per_step", c.channel.options.shadowing_per_step);
    o.read("force_los", c.channel.options.force_los);
    o.read("zero_shadowing", c.channel.options.zero_shadowing);
    o.read("frozen", c.channel.options.frozen);
    o.read("frozen_seed", c.channel.options.frozen_seed);
    o.finish();
  }
  chan.finish();

  Section obs = top.child("observation");
  obs.read("rate_scale_bps", c.observation.rate_scale_bps);
  obs.read("normalize_episode", c.observation.normalize_episode);
  obs.finish();

  Section tr = top.child("train");
  tr.read("episodes", c.train.episodes);
  tr.read("steps", c.train.steps);
  tr.read("epsilon_start", c.train.epsilon_start);
  tr.read("epsilon_end", c.train.epsilon_end);
  tr.read("epsilon_decay_fraction", c.train.epsilon_decay_fraction);
  tr.read_optional("fixed_epsilon", c.train.fixed_epsilon);
  tr.read("gamma", c.train.gamma);
  tr.read("minibatch", c.train.minibatch);
  tr.read("replay_capacity", c.train.replay_capacity);
  tr.read("target_sync_episodes", c.train.target_sync_episodes);
  tr.read("updates_per_episode", c.train.updates_per_episode);
  tr.read("hidden", c.train.hidden);
  tr.read("learning_rate", c.train.optimizer.learning_rate);
  tr.read("rmsprop_decay", c.train.optimizer.decay);
  tr.read("rmsprop_epsilon", c.train.optimizer.epsilon);
  tr.read("clip_norm", c.train.optimizer.clip_norm);
  tr.read("delta", c.train.delta);
  tr.read("workers", c.train.workers);
  tr.finish();
  tr.check([&] { c.train.validate(); });

  Section sw = top.child("sweep");
  sw.read("deltas", c.sweep.deltas);
  sw.read("ue_counts", c.sweep.ue_counts);
  sw.read("l_max_values", c.sweep.l_max_values);
  sw.read("l_max_factor", c.sweep.l_max_factor);
  sw.read("sbs_counts", c.sweep.sbs_counts);
  sw.finish();

  top.finish();
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ConfigError("override '" + assignment + "': " + e.msg);
  }
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string p; std::getline(ss, p, '.');) {
    if (p.empty()) throw ConfigError("override '" + assignment + "' has an empty key segment");
    parts.push_back(p);
  }
  // yaml-cpp nodes are handles, so reassigning a Node variable rebinds it;
  // walk with a stack of handles instead.
  std::vector<YAML::Node> chain{root};
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    YAML::Node parent = chain.back();
    if (!parent[parts[k]] || parent[parts[k]].IsNull()) parent[parts[k]] = YAML::Node(YAML::NodeType::Map);
    chain.push_back(parent[parts[k]]);
  }
  chain.back()[parts.back()] = value;
}

YAML::Node load_yaml(const std::string& text, const std::string& source) {
  try {
    YAML::Node root = YAML::Load(text);
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    return root;
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ": " + e.msg, e.mark.line + 1);
  }
}

// Shortest text that parses back to the same double.
std::string num(double v) { return fmt::format("{}", v); }
template <typename T>
const T& num(const T& v) {
  return v;
}

void emit_band(YAML::Emitter& out, const BandParams& b) {
  out << YAML::BeginMap;
  out << YAML::Key << "carrier_hz" << YAML::Value << num(b.carrier_hz);
  out << YAML::Key << "exp_los" << YAML::Value << num(b.exp_los);
  out << YAML::Key << "exp_nlos" << YAML::Value << num(b.exp_nlos);
  out << YAML::Key << "sigma_los_db" << YAML::Value << num(b.sigma_los_db);
  out << YAML::Key << "sigma_nlos_db" << YAML::Value << num(b.sigma_nlos_db);
  out << YAML::Key << "ref_distance_m" << YAML::Value << num(b.ref_distance_m);
  out << YAML::EndMap;
}

void emit_antenna(YAML::Emitter& out, const AntennaPattern& a) {
  out << YAML::BeginMap;
  out << YAML::Key << "main_gain_db" << YAML::Value << num(a.main_gain_db);
  out << YAML::Key << "side_gain_db" << YAML::Value << num(a.side_gain_db);
  out << YAML::Key << "beamwidth_deg" << YAML::Value << num(std::round(a.beamwidth_rad / kDegree * 1e9) / 1e9);
  out << YAML::EndMap;
}

template <typename T>
void emit_list(YAML::Emitter& out, const char* key, const std::vector<T>& v) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& x : v) out << num(x);
  out << YAML::EndSeq;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::vector<std::string>& overrides) {
  YAML::Node root = load_yaml(text, source);
  if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping", line_of(root));
  for (const auto& o : overrides) apply_override(root, o);
  return from_node(root);
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path, overrides);
}

ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const std::vector<std::string>& overrides) {
  if (overrides.empty()) return cfg;
  return parse_config(dump_config(cfg), "<config>", overrides);
}

std::string dump_config(const ExperimentConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << num(c.seed);
  out << YAML::Key << "run_id" << YAML::Value << num(c.run_id);
  out << YAML::Key << "output_dir" << YAML::Value << num(c.output_dir);
  {
    std::vector<std::string> names;
    for (Scheme s : c.schemes) names.push_back(to_string(s));
    emit_list(out, "schemes", names);
  }
  out << YAML::Key << "eval_steps" << YAML::Value << num(c.eval_steps);
  out << YAML::Key << "write_checkpoint" << YAML::Value << num(c.write_checkpoint);

  out << YAML::Key << "topology" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_sbs" << YAML::Value << num(c.topology.n_sbs);
  out << YAML::Key << "n_ue" << YAML::Value << num(c.topology.n_ue);
  out << YAML::Key << "radius_m" << YAML::Value << num(c.topology.radius_m);
  out << YAML::Key << "file" << YAML::Value << YAML::DoubleQuoted << c.topology.file;
  out << YAML::EndMap;

  out << YAML::Key << "radio" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "p_sbs_dbm" << YAML::Value << num(c.radio.p_sbs_dbm);
  out << YAML::Key << "p_mbs_dbm" << YAML::Value << num(c.radio.p_mbs_dbm);
  out << YAML::Key << "w_access_hz" << YAML::Value << num(c.radio.w_access_hz);
  out << YAML::Key << "w_backhaul_hz" << YAML::Value << num(c.radio.w_backhaul_hz);
  out << YAML::Key << "n0_dbm_per_mhz" << YAML::Value << num(c.radio.n0_dbm_per_mhz);
  out << YAML::Key << "n_blocks" << YAML::Value << num(c.radio.n_blocks);
  out << YAML::Key << "l_max" << YAML::Value << num(c.radio.l_max);
  out << YAML::Key << "ue_cap" << YAML::Value << num(c.radio.ue_cap);
  out << YAML::EndMap;

  out << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "access" << YAML::Value;
  emit_band(out, c.channel.access);
  out << YAML::Key << "backhaul" << YAML::Value;
  emit_band(out, c.channel.backhaul);
  out << YAML::Key << "blockage" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "a_los" << YAML::Value << num(c.channel.blockage.a_los);
  out << YAML::Key << "a_out" << YAML::Value << num(c.channel.blockage.a_out);
  out << YAML::Key << "b_out" << YAML::Value << num(c.channel.blockage.b_out);
  out << YAML::EndMap;
  out << YAML::Key << "antennas" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mbs" << YAML::Value;
  emit_antenna(out, c.channel.antennas.mbs);
  out << YAML::Key << "sbs" << YAML::Value;
  emit_antenna(out, c.channel.antennas.sbs);
  out << YAML::Key << "ue" << YAML::Value;
  emit_antenna(out, c.channel.antennas.ue);
  out << YAML::EndMap;
  out << YAML::Key << "options" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "shadowing_per_step" << YAML::Value << num(c.channel.options.shadowing_per_step);
  out << YAML::Key << "force_los" << YAML::Value << num(c.channel.options.force_los);
  out << YAML::Key << "zero_shadowing" << YAML::Value << num(c.channel.options.zero_shadowing);
  out << YAML::Key << "frozen" << YAML::Value << num(c.channel.options.frozen);
  out << YAML::Key << "frozen_seed" << YAML::Value << num(c.channel.options.frozen_seed);
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "observation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rate_scale_bps" << YAML::Value << num(c.observation.rate_scale_bps);
  out << YAML::Key << "normalize_episode" << YAML::Value << num(c.observation.normalize_episode);
  out << YAML::EndMap;

  const TrainConfig& t = c.train;
  out << YAML::Key << "train" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "episodes" << YAML::Value << num(t.episodes);
  out << YAML::Key << "steps" << YAML::Value << num(t.steps);
  out << YAML::Key << "epsilon_start" << YAML::Value << num(t.epsilon_start);
  out << YAML::Key << "epsilon_end" << YAML::Value << num(t.epsilon_end);
  out << YAML::Key << "epsilon_decay_fraction" << YAML::Value << num(t.epsilon_decay_fraction);
  out << YAML::Key << "fixed_epsilon" << YAML::Value;
  if (t.fixed_epsilon) out << num(*t.fixed_epsilon);
  else out << YAML::Null;
  out << YAML::Key << "gamma" << YAML::Value << num(t.gamma);
  out << YAML::Key << "minibatch" << YAML::Value << num(t.minibatch);
  out << YAML::Key << "replay_capacity" << YAML::Value << num(t.replay_capacity);
  out << YAML::Key << "target_sync_episodes" << YAML::Value << num(t.target_sync_episodes);
  out << YAML::Key << "updates_per_episode" << YAML::Value << num(t.updates_per_episode);
  emit_list(out, "hidden", t.hidden);
  out << YAML::Key << "learning_rate" << YAML::Value << num(t.optimizer.learning_rate);
  out << YAML::Key << "rmsprop_decay" << YAML::Value << num(t.optimizer.decay);
  out << YAML::Key << "rmsprop_epsilon" << YAML::Value << num(t.optimizer.epsilon);
  out << YAML::Key << "clip_norm" << YAML::Value << num(t.optimizer.clip_norm);
  out << YAML::Key << "delta" << YAML::Value << num(t.delta);
  out << YAML::Key << "workers" << YAML::Value << num(t.workers);
  out << YAML::EndMap;

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  emit_list(out, "deltas", c.sweep.deltas);
  emit_list(out, "ue_counts", c.sweep.ue_counts);
  emit_list(out, "l_max_values", c.sweep.l_max_values);
  out << YAML::Key << "l_max_factor" << YAML::Value << num(c.sweep.l_max_factor);
  emit_list(out, "sbs_counts", c.sweep.sbs_counts);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  // Where the files land is not part of the experiment.
  ExperimentConfig keyed = cfg;
  keyed.output_dir.clear();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : dump_config(keyed)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

Scenario build_scenario(const ExperimentConfig& cfg) {
  Scenario sc;
  if (!cfg.topology.file.empty()) {
    sc.topology = load_topology(cfg.topology.file);
  } else {
    Rng rng = make_rng(cfg.seed, Stream::Topology);
    sc.topology = generate_topology(cfg.topology.n_sbs, cfg.topology.n_ue, cfg.topology.radius_m, rng);
  }
  sc.channel = cfg.channel;
  sc.radio = cfg.radio;
  sc.observation = cfg.observation;
  sc.validate();
  return sc;
}

TrainConfig train_config(const ExperimentConfig& cfg) {
  TrainConfig t = cfg.train;
  t.seed = cfg.seed;
  return t;
}

}  // namespace hetnet
