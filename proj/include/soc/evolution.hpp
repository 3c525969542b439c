#pragma once

// Local, per-cell evolution. Parents for the differential-evolution operator
// come from the whole store (Global) or, per parent with equal odds, from a
// random adjacent cell (Mixed).

#include <vector>

#include "soc/population.hpp"

namespace soc {

enum class OperatorMode { Global, Mixed };

struct EvoParams {
  double crossover_rate = 0.2;
  double indexing_probability = 0.5;
  double local_probability = 0.5;  // Mixed mode only
  OperatorMode operator_mode = OperatorMode::Global;

  void validate() const;
};

struct EvolutionReport {
  int cell = 0;
  std::vector<ClassifierId> kept;
  std::vector<ClassifierId> discarded;
  std::vector<ClassifierId> indexed;  // existing classifiers given a new novel slot
  std::vector<ClassifierId> created;  // offspring
};

bool should_evolve(const SocSystem& system, int cell);

/// rand/1 mutant: a + scale * (b - c).
inline Genes de_mutant(const Genes& a, const Genes& b, const Genes& c, double scale) {
  return a + scale * (b - c);
}

/// Binomial crossover: each gene from `mutant` with probability `cr`, with
/// one uniformly chosen gene always taken from it.
Genes binomial_crossover(const Genes& mutant, const Genes& base, double cr, Rng& rng);

inline Genes clamp_genes(const Genes& g) { return g.cwiseMax(-1.0).cwiseMin(1.0); }

/// Parent ids for one offspring. Empty when fewer than three distinct
/// classifiers exist.
std::vector<ClassifierId> select_parents(const SocSystem& system, int cell,
                                         const EvoParams& params, Rng& rng);

Genes de_offspring(const SocSystem& system, int cell, const EvoParams& params, Rng& rng);

EvolutionReport evolve_cell(SocSystem& system, int cell, const EvoParams& params);

}  // namespace soc
