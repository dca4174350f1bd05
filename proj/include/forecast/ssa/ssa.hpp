#pragma once

// Velocity/position swarm search:
//   v <- alpha v + beta r1 * (global_best - x) + gamma r2 * (personal_best - x)
//   x <- clamp(x + v)
// with strict-improvement personal bests and an elitist global best.
// Lower fitness is better.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "forecast/numeric/rng.hpp"

namespace forecast {

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

struct SsaConfig {
  std::size_t population_size = 20;
  std::size_t max_iterations = 100;
  double alpha_start = 0.9;  // inertia decays linearly to alpha_end
  double alpha_end = 0.4;
  double beta = 1.5;   // pull toward the global best
  double gamma = 1.5;  // pull toward the personal best
  std::vector<Bounds> bounds;
  std::uint64_t seed = 0;
  // Optional explicit starting positions for the first individuals; the
  // rest are drawn uniformly within bounds.
  std::vector<std::vector<double>> initial_positions;

  void validate() const;
  std::size_t dimensions() const noexcept { return bounds.size(); }
  // Inertia for iteration t in [1, max_iterations].
  double alpha_at(std::size_t t) const;
};

struct Coefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

struct SparrowState {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> personal_best;
  double personal_best_fitness = std::numeric_limits<double>::infinity();
};

struct SwarmState {
  std::vector<SparrowState> sparrows;
  std::vector<double> global_best;
  double global_best_fitness = std::numeric_limits<double>::infinity();
  std::size_t iteration = 0;
};

using Objective = std::function<double(std::span<const double>)>;

// Non-finite values and exceptions from the objective both map to +inf.
double evaluate_fitness(const Objective& objective, std::span<const double> x);

SwarmState init_population(const SsaConfig& config, const Objective& objective,
                           const RngStream& rng);

std::vector<double> velocity_update(const SparrowState& s, std::span<const double> global_best,
                                    const Coefficients& k, std::span<const double> r1,
                                    std::span<const double> r2);
// Draws r1 and r2 componentwise from U[0, 1).
std::vector<double> velocity_update(const SparrowState& s, std::span<const double> global_best,
                                    const Coefficients& k, RngStream& rng);

// x + v clamped to bounds; sets s.position and s.velocity, zeroing the
// velocity of every clamped component.
std::vector<double> position_update(SparrowState& s, std::vector<double> v_new,
                                    std::span<const Bounds> bounds);

// Personal bests replace on strict improvement; the global best is the
// first minimum among personal bests and never worsens.
void update_bests(SwarmState& swarm, std::span<const double> fresh_fitness);

struct OptimizeResult {
  std::vector<double> best_position;
  double best_fitness = std::numeric_limits<double>::infinity();
  std::vector<double> trace;  // global best after init, then after each iteration
  std::size_t evaluations = 0;
};

OptimizeResult optimize(const Objective& objective, const SsaConfig& config);

double sphere(std::span<const double> x);

}  // namespace forecast
