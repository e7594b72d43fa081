#include <doctest.h>

#include <stdexcept>

#include <filesystem>

#include "topology.hpp"

using namespace hetnet;

TEST_CASE("generated topology stays in the disk") {
  Rng rng(7);
  const Topology t = generate_topology(20, 30, 200.0, rng);
  CHECK(t.n_sbs() == 20);
  CHECK(t.n_ue() == 30);
  for (const auto& p : t.sbs) CHECK(std::hypot(p.x, p.y) <= 200.0);
  for (const auto& p : t.ue) CHECK(std::hypot(p.x, p.y) <= 200.0);
  for (std::size_t j = 0; j < t.n_sbs(); ++j)
    for (std::size_t i = 0; i < t.n_ue(); ++i) CHECK(t.sbs_ue_distance(j, i) <= 400.0);
}

TEST_CASE("degenerate disk puts every node at the origin") {
  Rng rng(1);
  const Topology t = generate_topology(3, 4, 0.0, rng);
  for (const auto& p : t.sbs) CHECK(p == Point{0.0, 0.0});
  for (const auto& p : t.ue) CHECK(p == Point{0.0, 0.0});
}

TEST_CASE("area-uniform placement: mean squared radius") {
  Rng rng(3);
  const Topology t = generate_topology(1, 100000, 50.0, rng);
  double sq = 0.0;
  for (const auto& p : t.ue) sq += p.x * p.x + p.y * p.y;
  CHECK(std::abs(sq / t.n_ue() / (50.0 * 50.0 / 2.0) - 1.0) < 0.01);
}

TEST_CASE("distance") {
  Topology t;
  t.sbs = {{3.0, 4.0}};
  t.ue = {{3.0, 4.0}, {-1.0, 2.0}};
  CHECK(distance(t, NodeId::mbs(), NodeId::sbs(0)) == 5.0);
  CHECK(distance(t, NodeId::sbs(0), NodeId::ue(0)) == 0.0);
  CHECK_THROWS_AS(distance(t, NodeId::ue(5), NodeId::mbs()), std::out_of_range);

  Rng rng(19);
  const Topology r = generate_topology(5, 5, 100.0, rng);
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b)
      CHECK(distance(r, NodeId::sbs(a), NodeId::ue(b)) == distance(r, NodeId::ue(b), NodeId::sbs(a)));
}

TEST_CASE("same seed gives the same topology, different seeds differ") {
  Rng a(42), b(42), c(43);
  CHECK(generate_topology(4, 6, 100.0, a) == generate_topology(4, 6, 100.0, b));
  Rng d(42);
  CHECK_FALSE(generate_topology(4, 6, 100.0, d) == generate_topology(4, 6, 100.0, c));
}

TEST_CASE("snapshot round trip is exact") {
  Rng rng(8);
  const Topology t = generate_topology(6, 10, 123.456, rng);
  CHECK(topology_from_yaml(topology_to_yaml(t)) == t);
  const auto path = std::filesystem::temp_directory_path() / "hetnet_topology_test.yaml";
  save_topology(t, path.string());
  CHECK(load_topology(path.string()) == t);
  std::filesystem::remove(path);
  CHECK_THROWS(topology_from_yaml("format: something-else\n"));
}
