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
#include <string>
#include <vector>

#include "rng.hpp"

namespace hetnet {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

enum class NodeKind { Mbs, Sbs, Ue };

struct NodeId {
  NodeKind kind = NodeKind::Mbs;
  std::size_t index = 0;

  static NodeId mbs() { return {NodeKind::Mbs, 0}; }
  static NodeId sbs(std::size_t j) { return {NodeKind::Sbs, j}; }
  static NodeId ue(std::size_t i) { return {NodeKind::Ue, i}; }
};

/// Static deployment: one MBS, S small cells and N users inside a disk.
struct Topology {
  Point mbs;
  std::vector<Point> sbs;
  std::vector<Point> ue;
  double radius = 0.0;

  std::size_t n_sbs() const { return sbs.size(); }
  std::size_t n_ue() const { return ue.size(); }

  const Point& position(NodeId id) const;

  double sbs_ue_distance(std::size_t j, std::size_t i) const;
  double mbs_sbs_distance(std::size_t j) const;
  double mbs_ue_distance(std::size_t i) const;

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Area-uniform placement in a disk of the given radius centred on the MBS.
Topology generate_topology(std::size_t n_sbs, std::size_t n_ue, double radius, Rng& rng);

/// Euclidean distance; throws std::out_of_range for unknown ids.
double distance(const Topology& topo, NodeId a, NodeId b);

/// Structured-text (YAML) snapshot, exact to the last bit of every coordinate.
std::string topology_to_yaml(const Topology& topo);
Topology topology_from_yaml(const std::string& text);

void save_topology(const Topology& topo, const std::string& path);
Topology load_topology(const std::string& path);

}  // namespace hetnet
