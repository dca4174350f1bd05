#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "datasets.hpp"
#include "forecast/error.hpp"
#include "forecast/ssa/ssa.hpp"
#include "forecast/ssa/tune.hpp"

using namespace forecast;
using namespace forecast::testing;

namespace {

SsaConfig sphere_config(std::size_t dims, std::uint64_t seed) {
  SsaConfig c;
  c.bounds.assign(dims, Bounds{-5.0, 5.0});
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  SsaConfig c = sphere_config(2, 1);
  CHECK_NOTHROW(c.validate());
  c.population_size = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = sphere_config(2, 1);
  c.bounds[1] = {1.0, 1.0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = sphere_config(2, 1);
  c.beta = -0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = sphere_config(2, 1);
  c.initial_positions = {{9.0, 0.0}};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("inertia decays linearly") {
  SsaConfig c = sphere_config(1, 0);
  c.max_iterations = 11;
  CHECK(c.alpha_at(1) == doctest::Approx(0.9));
  CHECK(c.alpha_at(6) == doctest::Approx(0.65));
  CHECK(c.alpha_at(11) == doctest::Approx(0.4));
}

TEST_CASE("initial population") {
  const SsaConfig c = sphere_config(3, 8);
  const SwarmState a = init_population(c, sphere, RngStream(8));
  const SwarmState b = init_population(c, sphere, RngStream(8));
  double best = INFINITY;
  for (std::size_t i = 0; i < a.sparrows.size(); ++i) {
    const auto& s = a.sparrows[i];
    for (std::size_t d = 0; d < 3; ++d) {
      CHECK(s.position[d] >= -5.0);
      CHECK(s.position[d] <= 5.0);
      CHECK(s.velocity[d] == 0.0);
    }
    CHECK(s.personal_best == s.position);
    CHECK(s.personal_best_fitness == sphere(s.position));
    CHECK(s.position == b.sparrows[i].position);
    best = std::min(best, s.personal_best_fitness);
  }
  CHECK(a.global_best_fitness == best);

  SsaConfig seeded = c;
  seeded.initial_positions = {{1.0, 2.0, 3.0}};
  CHECK(init_population(seeded, sphere, RngStream(8)).sparrows[0].position ==
        std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("velocity update") {
  SparrowState s{{0.5, -1.0}, {0.3, 0.2}, {0.5, -1.0}, 0.0};
  const std::vector<double> ones{1.0, 1.0};
  auto v = velocity_update(s, s.position, {0.7, 1.5, 1.5}, ones, ones);
  CHECK(v[0] == doctest::Approx(0.21));
  CHECK(v[1] == doctest::Approx(0.14));
  s.velocity = {0.0, 0.0};
  v = velocity_update(s, s.position, {0.7, 1.5, 1.5}, ones, ones);
  CHECK(v == std::vector<double>{0.0, 0.0});

  SparrowState h{{0.0}, {1.0}, {1.0}, 0.0};
  const std::vector<double> one{1.0};
  CHECK(velocity_update(h, std::vector<double>{2.0}, {0.5, 1.0, 1.0}, one, one)[0] == 3.5);
  CHECK_THROWS_AS(velocity_update(h, std::vector<double>{2.0, 1.0}, {0.5, 1.0, 1.0}, one, one),
                  DimensionError);
}

TEST_CASE("position update clamps and zeroes the clamped velocity") {
  const std::vector<Bounds> b{{0.0, 1.0}, {0.0, 1.0}};
  SparrowState s{{0.9, 0.2}, {0.0, 0.0}, {0.9, 0.2}, 0.0};
  CHECK(position_update(s, {0.0, 0.0}, b) == std::vector<double>{0.9, 0.2});
  const auto x = position_update(s, {0.5, 0.3}, b);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == doctest::Approx(0.5));
  CHECK(s.velocity[0] == 0.0);
  CHECK(s.velocity[1] == 0.3);
}

TEST_CASE("fitness evaluation") {
  CHECK(evaluate_fitness(sphere, std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(evaluate_fitness(sphere, std::vector<double>{1.0, 1.0}) == 2.0);
  CHECK(std::isinf(evaluate_fitness([](std::span<const double>) { return std::nan(""); },
                                    std::vector<double>{1.0})));
  CHECK(std::isinf(evaluate_fitness(
      [](std::span<const double>) -> double { throw DataError("boom"); }, std::vector<double>{1.0})));
}

TEST_CASE("best updates use strict improvement") {
  SwarmState sw;
  sw.sparrows = {{{1.0}, {0.0}, {1.0}, 1.0}, {{2.0}, {0.0}, {2.0}, 4.0}};
  sw.global_best = {1.0};
  sw.global_best_fitness = 1.0;
  sw.sparrows[0].position = {0.5};
  sw.sparrows[1].position = {1.5};
  update_bests(sw, std::vector<double>{0.25, 4.0});
  CHECK(sw.sparrows[0].personal_best == std::vector<double>{0.5});
  CHECK(sw.sparrows[1].personal_best == std::vector<double>{2.0});  // equal fitness keeps the old best
  CHECK(sw.global_best_fitness == 0.25);
  sw.sparrows[0].position = {3.0};
  update_bests(sw, std::vector<double>{9.0, 8.0});
  CHECK(sw.global_best_fitness == 0.25);
}

TEST_CASE("optimize on the sphere") {
  SsaConfig c = sphere_config(5, 42);
  const OptimizeResult r = optimize(sphere, c);
  CHECK(r.best_fitness < 1e-3);
  CHECK(r.trace.size() == c.max_iterations + 1);
  CHECK(std::is_sorted(r.trace.rbegin(), r.trace.rend()));
  CHECK(r.evaluations == c.population_size * (c.max_iterations + 1));
  const OptimizeResult again = optimize(sphere, c);
  CHECK(again.trace == r.trace);
  CHECK(again.best_position == r.best_position);
}

TEST_CASE("without attraction, velocities decay geometrically") {
  SsaConfig c = sphere_config(3, 2);
  c.beta = c.gamma = 0.0;
  c.alpha_start = c.alpha_end = 0.6;
  c.bounds.assign(3, Bounds{-1e9, 1e9});
  SparrowState s{{1.0, 2.0, 3.0}, {0.5, -0.25, 1.0}, {1.0, 2.0, 3.0}, 0.0};
  const double n0 = std::hypot(0.5, -0.25, 1.0);
  RngStream rng(1);
  for (int t = 1; t <= 8; ++t) {
    position_update(s, velocity_update(s, s.personal_best, {0.6, 0.0, 0.0}, rng), c.bounds);
    const double n = std::hypot(s.velocity[0], s.velocity[1], s.velocity[2]);
    CHECK(n == doctest::Approx(std::pow(0.6, t) * n0).epsilon(1e-12));
  }
}

TEST_CASE("search space decoding") {
  const SearchSpace sp;
  const HyperParams base;
  RngStream rng(4);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x;
    for (const auto& b : sp.bounds()) x.push_back(rng.uniform(b.lo - 1.0, b.hi + 1.0));
    const HyperParams hp = sp.decode(x, base);
    CHECK(hp.learning_rate >= 1e-4 - 1e-18);
    CHECK(hp.learning_rate <= 1e-2 + 1e-18);
    CHECK(hp.gru_hidden >= 16);
    CHECK(hp.gru_hidden <= 128);
    CHECK(hp.kernel_len >= 2);
    CHECK(hp.kernel_len <= 5);
    CHECK(hp.conv_channels[0] >= 8);
    CHECK(hp.conv_channels[0] <= 32);
    CHECK(hp.conv_channels[1] == 2 * hp.conv_channels[0]);
    CHECK(hp.conv_channels[2] == 4 * hp.conv_channels[0]);
  }
  const HyperParams round_trip = sp.decode(sp.encode(base), base);
  CHECK(round_trip.gru_hidden == base.gru_hidden);
  CHECK(round_trip.kernel_len == base.kernel_len);
  CHECK(round_trip.conv_channels == base.conv_channels);
  CHECK(round_trip.learning_rate == doctest::Approx(base.learning_rate).epsilon(1e-12));
}

TEST_CASE("tiny tuning run") {
  HyperParams base = tiny_hp();
  base.batch_size = 8;
  SearchSpace sp;
  sp.gru_hidden = {2, 6};
  sp.base_channels = {1, 3};
  SsaConfig c;
  c.population_size = 4;
  c.max_iterations = 2;
  c.seed = 3;
  const WindowedDataset tr = sine_windows(24, 10, 2, 1), va = sine_windows(8, 10, 2, 2);
  const TuneResult r = tune_hyperparams(tr, va, sp, c, base, 3, true);
  CHECK_NOTHROW(r.best.validate());
  CHECK(r.evaluations.size() == 12);
  CHECK(r.trace.size() == 3);
  CHECK(std::is_sorted(r.trace.rbegin(), r.trace.rend()));
  std::vector<double> initial;
  for (std::size_t i = 0; i < r.initial_population; ++i) initial.push_back(r.evaluations[i].val_mse);
  std::sort(initial.begin(), initial.end());
  CHECK(r.best_val_mse <= initial[initial.size() / 2]);
  CHECK(r.evaluations[0].position == sp.encode(base));

  const TuneResult again = tune_hyperparams(tr, va, sp, c, base, 3, true);
  CHECK(again.trace == r.trace);
  CHECK(again.best == r.best);
}
