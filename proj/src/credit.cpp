#include "soc/credit.hpp"

#include <algorithm>
#include <limits>

namespace soc {

PendingUpdate make_pending(const SocSystem& system, const Activation& activation,
                           const Observation& observation) {
  return {activation.cell,   activation.group, activation.slot,
          activation.action, observation,      system.cell(activation.cell).generation};
}

double max_best_fitness(const SocSystem& system, int cell) {
  const CellState& c = system.cell(cell);
  if (!c.initialized) throw ContractViolation("max_best_fitness: cell is not initialized");
  double best = -std::numeric_limits<double>::infinity();
  for (const Slot& s : c.best) best = std::max(best, s.fitness);
  if (system.params().max_includes_novel) {
    for (const Slot& s : c.novel) best = std::max(best, s.fitness);
  }
  return best;
}

std::optional<double> apply_update(SocSystem& system, const PendingUpdate& pending, double reward,
                                   std::optional<int> next_cell) {
  CellState& c = system.cell(pending.cell);
  auto& slots = c.group(pending.group);
  if (c.generation != pending.generation || pending.slot >= slots.size()) {
    system.count_dropped_update();
    return std::nullopt;
  }
  std::optional<double> next_max;
  if (next_cell) next_max = max_best_fitness(system, *next_cell);
  const auto& p = system.params();
  Slot& slot = slots[pending.slot];
  slot.fitness = widrow_hoff(slot.fitness, fitness_target(reward, p.gamma, next_max), p.eta);
  return slot.fitness;
}

}  // namespace soc
