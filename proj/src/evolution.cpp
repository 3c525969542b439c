#include "soc/evolution.hpp"

#include <algorithm>

namespace soc {

namespace {

std::vector<ClassifierId> distinct_ids(const CellState& c) {
  std::vector<ClassifierId> ids;
  ids.reserve(c.best.size() + c.novel.size());
  for (const Slot& s : c.best) ids.push_back(s.classifier);
  for (const Slot& s : c.novel) ids.push_back(s.classifier);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<int> adjacent_initialized(const SocSystem& system, int cell) {
  const Grid& g = system.grid();
  const int cc = g.col_of(cell);
  const int cr = g.row_of(cell);
  std::vector<int> out;
  for (int row = std::max(0, cr - 1); row <= std::min(g.height() - 1, cr + 1); ++row) {
    for (int col = std::max(0, cc - 1); col <= std::min(g.width() - 1, cc + 1); ++col) {
      const int idx = g.index_of(col, row);
      if (idx != cell && system.cell(idx).initialized) out.push_back(idx);
    }
  }
  return out;
}

ClassifierId global_draw(const SocSystem& system, Rng& rng) {
  return system.store().at(uniform_index(rng, system.store().size())).id;
}

bool contains(const std::vector<ClassifierId>& ids, ClassifierId id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace

void EvoParams::validate() const {
  if (!(crossover_rate >= 0 && crossover_rate <= 1)) {
    throw ContractViolation("EvoParams: crossover_rate outside [0,1]");
  }
  if (!(indexing_probability >= 0 && indexing_probability <= 1)) {
    throw ContractViolation("EvoParams: indexing_probability outside [0,1]");
  }
  if (!(local_probability >= 0 && local_probability <= 1)) {
    throw ContractViolation("EvoParams: local_probability outside [0,1]");
  }
}

bool should_evolve(const SocSystem& system, int cell) {
  const CellState& c = system.cell(cell);
  if (!c.initialized) throw ContractViolation("should_evolve: cell is not initialized");
  return static_cast<double>(c.experience) >
         system.params().iota * system.params().subpopulation_size();
}

Genes binomial_crossover(const Genes& mutant, const Genes& base, double cr, Rng& rng) {
  const auto forced = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(mutant.size())));
  Genes trial = base;
  for (Eigen::Index j = 0; j < mutant.size(); ++j) {
    // Draw for every gene so the stream position does not depend on `forced`.
    const bool take = bernoulli(rng, cr);
    if (take || j == forced) trial[j] = mutant[j];
  }
  return trial;
}

std::vector<ClassifierId> select_parents(const SocSystem& system, int cell,
                                         const EvoParams& params, Rng& rng) {
  if (system.store().size() < 3) return {};
  std::vector<ClassifierId> chosen;
  const std::vector<int> neighbors = params.operator_mode == OperatorMode::Mixed
                                         ? adjacent_initialized(system, cell)
                                         : std::vector<int>{};
  constexpr int kLocalAttempts = 32;
  while (chosen.size() < 3) {
    ClassifierId pick = 0;
    bool found = false;
    if (params.operator_mode == OperatorMode::Mixed && !neighbors.empty()) {
      for (int attempt = 0; attempt < kLocalAttempts && !found; ++attempt) {
        if (!bernoulli(rng, params.local_probability)) break;
        const int source = neighbors[uniform_index(rng, neighbors.size())];
        const auto ids = distinct_ids(system.cell(source));
        pick = ids[uniform_index(rng, ids.size())];
        found = !contains(chosen, pick);
      }
    }
    while (!found) {
      pick = global_draw(system, rng);
      found = !contains(chosen, pick);
    }
    chosen.push_back(pick);
  }
  return chosen;
}

Genes de_offspring(const SocSystem& system, int cell, const EvoParams& params, Rng& rng) {
  const auto parents = select_parents(system, cell, params, rng);
  if (parents.empty()) return system.random_genes(rng);
  const double scale = uniform<double>(rng, 0.0, 1.0);
  const Genes mutant = de_mutant(system.genes_of(parents[0]), system.genes_of(parents[1]),
                                 system.genes_of(parents[2]), scale);
  const auto& best = system.cell(cell).best;
  if (best.empty()) throw ContractViolation("de_offspring: cell has no best slots");
  const Genes& base = system.genes_of(best[uniform_index(rng, best.size())].classifier);
  return clamp_genes(binomial_crossover(mutant, base, params.crossover_rate, rng));
}

EvolutionReport evolve_cell(SocSystem& system, int cell_index, const EvoParams& params) {
  CellState& c = system.cell(cell_index);
  if (!c.initialized) throw ContractViolation("evolve_cell: cell is not initialized");
  if (c.best.empty() && c.novel.empty()) throw ContractViolation("evolve_cell: cell has no slots");
  const auto& p = system.params();
  Rng& rng = system.evolution_rng();
  EvolutionReport report;
  report.cell = cell_index;

  std::vector<Slot> ranked;
  ranked.reserve(c.best.size() + c.novel.size());
  ranked.insert(ranked.end(), c.best.begin(), c.best.end());
  ranked.insert(ranked.end(), c.novel.begin(), c.novel.end());
  std::sort(ranked.begin(), ranked.end(), [](const Slot& a, const Slot& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    return a.serial < b.serial;
  });
  const auto keep = std::min(ranked.size(), static_cast<std::size_t>(p.beta));
  c.best.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep));
  c.novel.assign(ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end());
  for (const Slot& s : c.best) report.kept.push_back(s.classifier);
  while (!c.novel.empty()) {
    report.discarded.push_back(c.novel.back().classifier);
    system.remove_slot(cell_index, Group::Novel, c.novel.size() - 1);
  }

  for (int i = 0; i < p.nu; ++i) {
    if (system.store().size() > 0 && bernoulli(rng, params.indexing_probability)) {
      const ClassifierId id = global_draw(system, rng);
      system.add_index(cell_index, Group::Novel, id);
      report.indexed.push_back(id);
    } else {
      const Genes child = de_offspring(system, cell_index, params, rng);
      report.created.push_back(system.add_classifier(cell_index, Group::Novel, child));
    }
  }
  c.experience = 0;
  ++c.generation;
  return report;
}

}  // namespace soc
