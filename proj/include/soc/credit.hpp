#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "soc/population.hpp"

namespace soc {

/// The (cell, slot) that acted in the previous cycle, awaiting its reward.
struct PendingUpdate {
  int cell = 0;
  Group group = Group::Best;
  std::size_t slot = 0;
  Genes action = Genes::Zero();
  Observation observation = Observation::Zero();
  std::uint64_t generation = 0;  // cell generation when the slot acted
};

PendingUpdate make_pending(const SocSystem& system, const Activation& activation,
                           const Observation& observation);

/// Largest slot fitness in an initialized cell. Covers best and novel slots
/// unless `SocParams::max_includes_novel` is off.
double max_best_fitness(const SocSystem& system, int cell);

/// R + gamma * next_max, or just R on a terminal step.
inline double fitness_target(double reward, double gamma, std::optional<double> next_max) {
  return next_max ? reward + gamma * *next_max : reward;
}

inline double widrow_hoff(double fitness, double target, double eta) {
  return fitness + eta * (target - fitness);
}

/// Applies the niched update to exactly one slot. Returns the new fitness, or
/// nullopt when an evolution event consumed the slot (counted as dropped).
std::optional<double> apply_update(SocSystem& system, const PendingUpdate& pending, double reward,
                                   std::optional<int> next_cell);

}  // namespace soc
