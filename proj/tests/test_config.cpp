#include <doctest.h>

#include <stdexcept>

#include <string>

#include "config.hpp"

using namespace hetnet;

TEST_CASE("defaults") {
  const ExperimentConfig d = default_config();
  CHECK(d.topology.n_ue == 6);
  CHECK(d.topology.n_sbs == 4);
  CHECK(d.train.episodes == 600);
  CHECK(d.train.steps == 200);
  CHECK_NOTHROW(d.validate());
  const ExperimentConfig p = full_scale_config();
  CHECK(p.topology.n_ue == 30);
  CHECK(p.topology.n_sbs == 20);
  CHECK(p.radio.n_blocks == 300);
  CHECK(p.train.episodes == 3000);
  CHECK(p.train.steps == 1000);
  CHECK(p.train.minibatch == 1000);
  CHECK(p.train.replay_capacity == 150000);
  CHECK(p.train.hidden == std::vector<int>{400, 350, 300});
  CHECK(p.train.gamma == 0.9);
  CHECK(p.train.optimizer.learning_rate == 1e-4);
  CHECK(p.radio.ue_cap == 20);
  CHECK(p.sweep.l_max_values == std::vector<int>{18, 15, 12, 10, 9});
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("round trip: parse, dump, parse") {
  ExperimentConfig c = full_scale_config();
  c.seed = 99;
  c.train.fixed_epsilon = 0.25;
  c.channel.options.frozen = true;
  c.schemes = {Scheme::Hl, Scheme::Da};
  c.output_dir = "some dir/with: colon";
  const std::string once = dump_config(c);
  const ExperimentConfig back = parse_config(once);
  CHECK(dump_config(back) == once);
  CHECK(back.seed == 99);
  CHECK(back.train.fixed_epsilon == 0.25);
  CHECK(back.output_dir == c.output_dir);
  CHECK(back.channel.antennas.sbs.beamwidth_rad == doctest::Approx(c.channel.antennas.sbs.beamwidth_rad));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(parse_config(dump_config(default_config())).train.fixed_epsilon == std::nullopt);
}

TEST_CASE("partial configs keep defaults") {
  const auto c = parse_config("seed: 5\ntrain:\n  episodes: 10\n");
  CHECK(c.seed == 5);
  CHECK(c.train.episodes == 10);
  CHECK(c.train.steps == 200);
  CHECK(parse_config("").seed == default_config().seed);
}

TEST_CASE("line-precise errors") {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("seed: 1\ntrain:\n  episodes: many\n") == 3);
  CHECK(line_of("seed: 1\nradio:\n  l_max: 12\n  bogus: 3\n") == 4);
  CHECK(line_of("seed: 1\nradio:\n  n_blocks: 60\n  l_max: 0\n") == 3);
  CHECK(line_of("seed: 1\nschemes: [hl, nope]\n") == 2);
  CHECK(line_of("seed: [1\n") >= 1);
  CHECK_THROWS_WITH_AS(parse_config("train:\n  gamma: 1.5\n"), doctest::Contains("line 2"), ConfigError);
}

TEST_CASE("cross-field validation") {
  CHECK_THROWS_AS(parse_config("radio:\n  n_blocks: 300\n"), ConfigError);
  CHECK_NOTHROW(parse_config("radio:\n  n_blocks: 300\nschemes: [hl]\n"));
}

TEST_CASE("overrides") {
  const auto c = parse_config("seed: 1\n", "<t>", {"train.episodes=7", "seed=3", "channel.options.force_los=true",
                                                  "sweep.deltas=[0, 1]"});
  CHECK(c.train.episodes == 7);
  CHECK(c.seed == 3);
  CHECK(c.channel.options.force_los);
  CHECK(c.sweep.deltas == std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(apply_overrides(c, {"train.nope=1"}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(c, {"novalue"}), ConfigError);
  CHECK(apply_overrides(c, {"run_id=abc"}).run_id == "abc");
}

TEST_CASE("scenario construction is seeded") {
  const auto a = build_scenario(default_config());
  const auto b = build_scenario(default_config());
  CHECK(a.topology == b.topology);
  auto c = default_config();
  c.seed = 2;
  CHECK_FALSE(build_scenario(c).topology == a.topology);
  CHECK(train_config(c).seed == 2);
}
