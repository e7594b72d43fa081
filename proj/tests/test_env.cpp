#include <doctest.h>

#include <stdexcept>

#include <map>
#include <numeric>

#include "env.hpp"
#include "fixtures.hpp"

using namespace hetnet;

TEST_CASE("action codec") {
  const ActionCodec codec(3, 12);
  CHECK(codec.size() == 39);
  CHECK(codec.decode(0) == Action{0, 0});
  CHECK(codec.decode(13) == Action{1, 0});
  CHECK(codec.decode(38) == Action{2, 12});
  for (int k = 0; k < static_cast<int>(codec.size()); ++k) CHECK(codec.encode(codec.decode(k)) == k);
  CHECK_THROWS_AS(codec.decode(39), std::out_of_range);
  CHECK_THROWS_AS(codec.decode(-1), std::out_of_range);
}

TEST_CASE("composition sampler") {
  SUBCASE("counts") {
    CHECK(CompositionSampler(2, 4, 4).count() == 5.0);
    CHECK(CompositionSampler(3, 3, 1).count() == 1.0);
    CHECK(CompositionSampler(30, 300, 12).count() > 1.0);
  }
  SUBCASE("two parts summing to four: uniform marginal") {
    CompositionSampler s(2, 4, 4);
    Rng rng(4);
    const int n = 100000;
    std::map<int, int> first;
    for (int k = 0; k < n; ++k) {
      const auto c = s.sample(rng);
      REQUIRE(c[0] + c[1] == 4);
      ++first[c[0]];
    }
    // Compositions (0,4) .. (4,0) are equally likely.
    const double p = 1.0 / 5.0;
    const double se = std::sqrt(p * (1 - p) / n);
    for (int v = 0; v <= 4; ++v) CHECK(std::abs(first[v] / double(n) - p) < 3 * se);
  }
}

TEST_CASE("reset and observations") {
  Scenario sc = fixtures::random_scenario(4, 6, 100.0, 60, 12, 5);
  Environment a(sc, 99), b(sc, 99);
  const auto oa = a.reset(3, 10, 0.7);
  const auto ob = b.reset(3, 10, 0.7);
  REQUIRE(oa.size() == 6);
  for (std::size_t i = 0; i < oa.size(); ++i) {
    CHECK(oa[i].beta_prev == 0.0);
    CHECK(oa[i].total_rate_prev == 0.0);
    CHECK(oa[i].own_rate_prev == 0.0);
    CHECK(oa[i].episode == doctest::Approx(0.3));
    CHECK(oa[i].epsilon == 0.7);
    const auto v = oa[i].to_vector(sc.observation);
    CHECK(v.size() == observation_size(4));
    CHECK(v.size() == 9);
    CHECK(v == ob[i].to_vector(sc.observation));
    for (double s : oa[i].link_states) CHECK((s == 0.0 || s == 0.5 || s == 1.0));
  }
}

TEST_CASE("step before reset is an error") {
  Environment env(fixtures::random_scenario(2, 2, 50.0, 4, 4, 1), 1);
  std::vector<int> joint{0, 0};
  CHECK_THROWS_AS(env.step(joint, 0.5), std::logic_error);
}

TEST_CASE("rewards") {
  ThroughputReport r;
  r.r_actual = {2e9, 1e9, 0.0};
  r.total = 3e9;
  r.backhaul_ok = true;
  r.sbs_load = {2, 1};
  const std::vector<int> assoc{0, 0, 1};
  SUBCASE("substitution") {
    const auto rw = compute_rewards(r, assoc, 20, 0.2);
    CHECK(rw[0] == doctest::Approx(0.2 * 2.0 + 0.8 * 1.0));
  }
  SUBCASE("common reward at delta 0") {
    const auto rw = compute_rewards(r, assoc, 20, 0.0);
    CHECK(rw[0] == rw[1]);
    CHECK(rw[1] == rw[2]);
  }
  SUBCASE("own rate at delta 1") {
    const auto rw = compute_rewards(r, assoc, 20, 1.0);
    CHECK(rw[0] == doctest::Approx(2.0));
    CHECK(rw[1] == doctest::Approx(1.0));
  }
  SUBCASE("block budget exceeded") {
    ThroughputReport bad = r;
    bad.backhaul_ok = false;
    for (double x : compute_rewards(bad, assoc, 20, 0.5)) CHECK(x == 0.0);
  }
  SUBCASE("over-capacity SBS") {
    const auto rw = compute_rewards(r, assoc, 1, 0.5);
    CHECK(rw[0] == 0.0);
    CHECK(rw[1] == 0.0);
    CHECK(rw[2] > 0.0);
  }
}

TEST_CASE("step is a pure function of the action on a fixed channel") {
  Scenario sc = fixtures::random_scenario(3, 4, 80.0, 20, 8, 12);
  const ActionCodec codec(3, 8);
  ChannelSampler sampler(sc.topology, sc.channel, 5);
  const auto cur = sampler.next();
  const auto nxt = sampler.next();
  const std::vector<int> joint{3, 12, 20, 5};
  const auto a = compute_step(sc, codec, joint, cur, nxt, 0.4, 0.1, 0.5);
  const auto b = compute_step(sc, codec, joint, cur, nxt, 0.4, 0.1, 0.5);
  CHECK(a.rewards == b.rewards);
  CHECK(a.realized_total == b.realized_total);
  CHECK(a.state_hash == cur.state_hash());
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(a.next_obs[i].own_rate_prev == a.realized_rates[i]);
    CHECK(a.next_obs[i].total_rate_prev == a.realized_total);
    CHECK(a.next_obs[i].beta_prev == a.beta_observation);
    for (std::size_t j = 0; j < 3; ++j) CHECK(a.next_obs[i].link_states[j] == encode(nxt.state(j, i)));
  }
}

TEST_CASE("random feasible joint actions") {
  Scenario sc = fixtures::random_scenario(4, 6, 100.0, 60, 12, 8, 2);
  Environment env(sc, 3);
  Rng rng(17);
  for (int k = 0; k < 5000; ++k) {
    const auto joint = env.random_feasible_joint_action(rng);
    const auto d = decode_joint(env.codec(), joint);
    CHECK(std::accumulate(d.blocks.begin(), d.blocks.end(), 0) == 60);
    std::vector<int> load(4, 0);
    for (int j : d.assoc) ++load[j];
    for (int n : load) CHECK(n <= 2);
    for (int l : d.blocks) CHECK(l <= 12);
  }
  SUBCASE("infeasible block budget") {
    Environment small(fixtures::random_scenario(2, 2, 50.0, 10, 4, 1), 1);
    CHECK_THROWS_AS(small.random_feasible_joint_action(rng), std::invalid_argument);
  }
  SUBCASE("infeasible capacity") {
    Environment small(fixtures::random_scenario(1, 3, 50.0, 6, 4, 1, 2), 1);
    CHECK_THROWS_AS(small.random_feasible_joint_action(rng), std::invalid_argument);
  }
}
