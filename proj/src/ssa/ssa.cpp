#include "forecast/ssa/ssa.hpp"

#include <cmath>

#include "forecast/error.hpp"

namespace forecast {

void SsaConfig::validate() const {
  if (population_size < 2) throw ConfigError("ssa: population_size must be at least 2");
  if (max_iterations == 0) throw ConfigError("ssa: max_iterations must be positive");
  if (bounds.empty()) throw ConfigError("ssa: no search dimensions");
  for (const auto& b : bounds) {
    if (!(b.lo < b.hi)) throw ConfigError("ssa: every bound needs lo < hi");
  }
  if (!(alpha_start >= 0 && alpha_end >= 0 && beta >= 0 && gamma >= 0)) {
    throw ConfigError("ssa: alpha, beta and gamma must be non-negative");
  }
  if (initial_positions.size() > population_size) {
    throw ConfigError("ssa: more initial positions than individuals");
  }
  for (const auto& p : initial_positions) {
    if (p.size() != bounds.size()) throw ConfigError("ssa: initial position has wrong dimension");
    for (std::size_t d = 0; d < p.size(); ++d) {
      if (p[d] < bounds[d].lo || p[d] > bounds[d].hi) {
        throw ConfigError("ssa: initial position outside bounds");
      }
    }
  }
}

double SsaConfig::alpha_at(std::size_t t) const {
  if (max_iterations <= 1) return alpha_start;
  const double frac = static_cast<double>(t - 1) / static_cast<double>(max_iterations - 1);
  return alpha_start + (alpha_end - alpha_start) * frac;
}

double evaluate_fitness(const Objective& objective, std::span<const double> x) {
  double f;
  try {
    f = objective(x);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
  return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
}

SwarmState init_population(const SsaConfig& config, const Objective& objective,
                           const RngStream& rng) {
  config.validate();
  const std::size_t dims = config.dimensions();
  SwarmState swarm;
  std::vector<double> fitness;
  for (std::size_t i = 0; i < config.population_size; ++i) {
    SparrowState s;
    if (i < config.initial_positions.size()) {
      s.position = config.initial_positions[i];
    } else {
      RngStream stream = rng.child("init", i);
      for (const auto& b : config.bounds) s.position.push_back(stream.uniform(b.lo, b.hi));
    }
    s.velocity.assign(dims, 0.0);
    s.personal_best = s.position;
    s.personal_best_fitness = evaluate_fitness(objective, s.position);
    fitness.push_back(s.personal_best_fitness);
    swarm.sparrows.push_back(std::move(s));
  }
  swarm.global_best = swarm.sparrows.front().position;
  swarm.global_best_fitness = std::numeric_limits<double>::infinity();
  for (const auto& s : swarm.sparrows) {
    if (s.personal_best_fitness < swarm.global_best_fitness) {
      swarm.global_best_fitness = s.personal_best_fitness;
      swarm.global_best = s.personal_best;
    }
  }
  return swarm;
}

std::vector<double> velocity_update(const SparrowState& s, std::span<const double> global_best,
                                    const Coefficients& k, std::span<const double> r1,
                                    std::span<const double> r2) {
  const std::size_t n = s.position.size();
  if (global_best.size() != n || s.velocity.size() != n || s.personal_best.size() != n ||
      r1.size() != n || r2.size() != n) {
    throw DimensionError("velocity_update: dimension mismatch");
  }
  std::vector<double> v(n);
  for (std::size_t d = 0; d < n; ++d) {
    v[d] = k.alpha * s.velocity[d] + k.beta * r1[d] * (global_best[d] - s.position[d]) +
           k.gamma * r2[d] * (s.personal_best[d] - s.position[d]);
  }
  return v;
}

std::vector<double> velocity_update(const SparrowState& s, std::span<const double> global_best,
                                    const Coefficients& k, RngStream& rng) {
  const std::size_t n = s.position.size();
  std::vector<double> r1(n), r2(n);
  for (auto& r : r1) r = rng.next_double();
  for (auto& r : r2) r = rng.next_double();
  return velocity_update(s, global_best, k, r1, r2);
}

std::vector<double> position_update(SparrowState& s, std::vector<double> v_new,
                                    std::span<const Bounds> bounds) {
  const std::size_t n = s.position.size();
  if (v_new.size() != n || bounds.size() != n) {
    throw DimensionError("position_update: dimension mismatch");
  }
  for (std::size_t d = 0; d < n; ++d) {
    double x = s.position[d] + v_new[d];
    if (x < bounds[d].lo) {
      x = bounds[d].lo;
      v_new[d] = 0.0;
    } else if (x > bounds[d].hi) {
      x = bounds[d].hi;
      v_new[d] = 0.0;
    }
    s.position[d] = x;
  }
  s.velocity = std::move(v_new);
  return s.position;
}

void update_bests(SwarmState& swarm, std::span<const double> fresh_fitness) {
  if (fresh_fitness.size() != swarm.sparrows.size()) {
    throw DimensionError("update_bests: fitness count does not match the swarm");
  }
  for (std::size_t i = 0; i < swarm.sparrows.size(); ++i) {
    auto& s = swarm.sparrows[i];
    if (fresh_fitness[i] < s.personal_best_fitness) {
      s.personal_best = s.position;
      s.personal_best_fitness = fresh_fitness[i];
    }
  }
  for (const auto& s : swarm.sparrows) {
    if (s.personal_best_fitness < swarm.global_best_fitness) {
      swarm.global_best_fitness = s.personal_best_fitness;
      swarm.global_best = s.personal_best;
    }
  }
}

OptimizeResult optimize(const Objective& objective, const SsaConfig& config) {
  const RngStream root(config.seed);
  SwarmState swarm = init_population(config, objective, root);
  OptimizeResult result;
  result.evaluations = config.population_size;
  result.trace.push_back(swarm.global_best_fitness);

  std::vector<double> fitness(swarm.sparrows.size());
  for (std::size_t t = 1; t <= config.max_iterations; ++t) {
    const Coefficients k{config.alpha_at(t), config.beta, config.gamma};
    // Every individual moves against the same global best snapshot.
    const std::vector<double> global_best = swarm.global_best;
    for (std::size_t i = 0; i < swarm.sparrows.size(); ++i) {
      RngStream stream = root.child("iter", t * 1000003ULL + i);
      auto& s = swarm.sparrows[i];
      position_update(s, velocity_update(s, global_best, k, stream), config.bounds);
      fitness[i] = evaluate_fitness(objective, s.position);
    }
    result.evaluations += swarm.sparrows.size();
    update_bests(swarm, fitness);
    swarm.iteration = t;
    result.trace.push_back(swarm.global_best_fitness);
  }
  result.best_position = swarm.global_best;
  result.best_fitness = swarm.global_best_fitness;
  return result;
}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace forecast
