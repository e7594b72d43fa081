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


#include "topology.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

namespace hetnet {

namespace {

double euclid(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point sample_disk(double radius, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r = radius * std::sqrt(unif(rng));
  const double phi = 2.0 * 3.14159265358979323846 * unif(rng);
  return {r * std::cos(phi), r * std::sin(phi)};
}

void emit_points(YAML::Emitter& out, const char* key, const std::vector<Point>& pts) {
  out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
  for (const auto& p : pts) out << YAML::Flow << YAML::BeginSeq << p.x << p.y << YAML::EndSeq;
  out << YAML::EndSeq;
}

Point parse_point(const YAML::Node& n) {
  if (!n.IsSequence() || n.size() != 2)
    throw std::invalid_argument("topology: point at line " + std::to_string(n.Mark().line + 1) +
                                " must be a 2-element sequence");
  return {n[0].as<double>(), n[1].as<double>()};
}

}  // namespace

const Point& Topology::position(NodeId id) const {
  switch (id.kind) {
    case NodeKind::Mbs:
      if (id.index != 0) throw std::out_of_range("topology: MBS index must be 0");
      return mbs;
    case NodeKind::Sbs:
      if (id.index >= sbs.size()) throw std::out_of_range("topology: SBS index out of range");
      return sbs[id.index];
    case NodeKind::Ue:
      if (id.index >= ue.size()) throw std::out_of_range("topology: UE index out of range");
      return ue[id.index];
  }
  throw std::out_of_range("topology: unknown node kind");
}

double Topology::sbs_ue_distance(std::size_t j, std::size_t i) const { return euclid(sbs[j], ue[i]); }
double Topology::mbs_sbs_distance(std::size_t j) const { return euclid(mbs, sbs[j]); }
double Topology::mbs_ue_distance(std::size_t i) const { return euclid(mbs, ue[i]); }

Topology generate_topology(std::size_t n_sbs, std::size_t n_ue, double radius, Rng& rng) {
  if (n_sbs == 0 || n_ue == 0) throw std::invalid_argument("generate_topology: need at least one SBS and one UE");
  if (!(radius >= 0.0)) throw std::invalid_argument("generate_topology: radius must be non-negative");
  Topology t;
  t.radius = radius;
  t.sbs.reserve(n_sbs);
  t.ue.reserve(n_ue);
  for (std::size_t j = 0; j < n_sbs; ++j) t.sbs.push_back(sample_disk(radius, rng));
  for (std::size_t i = 0; i < n_ue; ++i) t.ue.push_back(sample_disk(radius, rng));
  return t;
}

double distance(const Topology& topo, NodeId a, NodeId b) { return euclid(topo.position(a), topo.position(b)); }

std::string topology_to_yaml(const Topology& topo) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "format" << YAML::Value << "hetnet-topology/1";
  out << YAML::Key << "radius" << YAML::Value << topo.radius;
  out << YAML::Key << "mbs" << YAML::Value << YAML::Flow << YAML::BeginSeq << topo.mbs.x << topo.mbs.y
      << YAML::EndSeq;
  emit_points(out, "sbs", topo.sbs);
  emit_points(out, "ue", topo.ue);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

Topology topology_from_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("topology: ") + e.what());
  }
  if (!root["format"] || root["format"].as<std::string>() != "hetnet-topology/1")
    throw std::invalid_argument("topology: missing or unsupported format tag");
  Topology t;
  t.radius = root["radius"].as<double>();
  t.mbs = parse_point(root["mbs"]);
  for (const auto& n : root["sbs"]) t.sbs.push_back(parse_point(n));
  for (const auto& n : root["ue"]) t.ue.push_back(parse_point(n));
  if (t.sbs.empty() || t.ue.empty()) throw std::invalid_argument("topology: need at least one SBS and one UE");
  return t;
}

void save_topology(const Topology& topo, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << topology_to_yaml(topo);
}

Topology load_topology(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return topology_from_yaml(ss.str());
}

}  // namespace hetnet
