#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "soc/evolution.hpp"

namespace soc {
namespace {

SocSystem make(int w, int h, std::uint64_t seed = 1) {
  return SocSystem::create(w, h, SocParams{}, SomParams<double>::for_grid(w, h), seed);
}

TEST(ShouldEvolve, StrictlyAboveIotaTimesSize) {
  SocSystem s = make(1, 1);
  s.ensure_cell_initialized(0);
  s.cell(0).experience = 140;
  EXPECT_FALSE(should_evolve(s, 0));
  s.cell(0).experience = 141;
  EXPECT_TRUE(should_evolve(s, 0));
  s.cell(0).experience = 0;
  EXPECT_FALSE(should_evolve(s, 0));
}

TEST(ShouldEvolve, UninitializedCellThrows) {
  SocSystem s = make(2, 1);
  EXPECT_THROW(should_evolve(s, 1), ContractViolation);
}

TEST(DeMutant, RandOneArithmetic) {
  const Genes v = de_mutant(Genes(0.2, 0.4), Genes(0.6, 0.1), Genes(0.1, 0.3), 0.5);
  EXPECT_DOUBLE_EQ(v(0), 0.45);
  EXPECT_DOUBLE_EQ(v(1), 0.30);
  Rng rng(1);
  const Genes t = binomial_crossover(v, Genes(-0.9, -0.9), 1.0, rng);
  EXPECT_EQ(t, v);
}

TEST(DeMutant, EqualDifferenceVectorsGiveBase) {
  const Genes a(0.7, -0.3);
  for (double f : {0.0, 0.3, 1.0}) EXPECT_EQ(de_mutant(a, Genes(0.5, 0.5), Genes(0.5, 0.5), f), a);
}

TEST(DeMutant, ClampToBox) {
  EXPECT_EQ(clamp_genes(Genes(1.4, -0.2)), Genes(1.0, -0.2));
  EXPECT_EQ(clamp_genes(Genes(-3, 1)), Genes(-1.0, 1.0));
}

TEST(Crossover, ZeroRateTakesExactlyOneMutantGene) {
  Rng rng(3);
  const Genes mutant(0.5, 0.5);
  const Genes base(-0.5, -0.5);
  int first = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const Genes t = binomial_crossover(mutant, base, 0.0, rng);
    const int from_mutant = (t(0) == 0.5) + (t(1) == 0.5);
    ASSERT_EQ(from_mutant, 1);
    first += t(0) == 0.5;
  }
  EXPECT_NEAR(first / double(n), 0.5, 0.03);
}

TEST(Crossover, RateControlsMutantShare) {
  Rng rng(4);
  const Genes mutant(1, 1);
  const Genes base(0, 0);
  int taken = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) taken += binomial_crossover(mutant, base, 0.2, rng).sum();
  // The forced gene always, the other one at rate 0.2.
  EXPECT_NEAR(taken / double(n), 1.2, 0.03);
}

TEST(DeOffspring, FewerThanThreeClassifiersGivesRandomGenes) {
  SocSystem s = make(1, 1);
  s.add_classifier(0, Group::Best, Genes(0.1, 0.1));
  s.add_classifier(0, Group::Novel, Genes(0.2, 0.2));
  Rng rng(1);
  EXPECT_TRUE(select_parents(s, 0, EvoParams{}, rng).empty());
  std::set<double> seen;
  for (int i = 0; i < 50; ++i) {
    const Genes g = de_offspring(s, 0, EvoParams{}, rng);
    EXPECT_LE(g.cwiseAbs().maxCoeff(), 1.0);
    seen.insert(g(0));
  }
  EXPECT_GT(seen.size(), 40u);
}

TEST(DeOffspring, StaysInBox) {
  SocSystem s = make(3, 3);
  for (int c = 0; c < 9; ++c) s.ensure_cell_initialized(c);
  s.add_classifier(0, Group::Novel, Genes(1, 1));
  s.add_classifier(0, Group::Novel, Genes(-1, -1));
  Rng rng(2);
  for (int i = 0; i < 5000; ++i) {
    const Genes g = de_offspring(s, static_cast<int>(uniform_index(rng, 9)), EvoParams{}, rng);
    ASSERT_LE(g.cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(SelectParents, DistinctAndUniformOverClassifiers) {
  SocSystem s = make(1, 1);
  const ClassifierId heavy = s.add_classifier(0, Group::Novel, Genes::Zero());
  for (int i = 0; i < 50; ++i) s.add_index(0, Group::Novel, heavy);
  for (int i = 0; i < 9; ++i) s.add_classifier(0, Group::Novel, Genes::Zero());
  Rng rng(6);
  int heavy_hits = 0;
  const int n = 6000;
  for (int i = 0; i < n; ++i) {
    const auto p = select_parents(s, 0, EvoParams{}, rng);
    ASSERT_EQ(p.size(), 3u);
    ASSERT_EQ(std::set<ClassifierId>(p.begin(), p.end()).size(), 3u);
    heavy_hits += std::count(p.begin(), p.end(), heavy);
  }
  // Numerosity is ignored: each of 10 distinct classifiers appears with rate 3/10.
  EXPECT_NEAR(heavy_hits / double(n), 0.3, 0.03);
}

TEST(SelectParents, ForcedLocalDrawsComeFromAdjacentCells) {
  SocSystem s = make(5, 5, 8);
  const int center = s.grid().index_of(2, 2);
  for (int c = 0; c < 25; ++c) s.ensure_cell_initialized(c);
  std::set<ClassifierId> adjacent;
  for (int c = 0; c < 25; ++c) {
    if (s.grid().lattice_distance(c, center) != 1) continue;
    for (const auto* g : {&s.cell(c).best, &s.cell(c).novel}) {
      for (const Slot& slot : *g) adjacent.insert(slot.classifier);
    }
  }
  EvoParams p;
  p.operator_mode = OperatorMode::Mixed;
  p.local_probability = 1.0;
  Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    for (ClassifierId id : select_parents(s, center, p, rng)) {
      ASSERT_TRUE(adjacent.count(id)) << "parent " << id << " is not indexed next to the cell";
    }
  }
}

TEST(SelectParents, MixedWithoutNeighborsFallsBackToGlobal) {
  SocSystem s = make(5, 1, 8);
  s.ensure_cell_initialized(0);
  s.ensure_cell_initialized(4);
  EvoParams p;
  p.operator_mode = OperatorMode::Mixed;
  p.local_probability = 1.0;
  Rng rng(8);
  const auto parents = select_parents(s, 0, p, rng);
  EXPECT_EQ(parents.size(), 3u);
}

TEST(EvolveCell, KeepsTopBeta) {
  SocSystem s = make(1, 1);
  s.ensure_cell_initialized(0);
  CellState& c = s.cell(0);
  const double fitness[] = {16, -2, 0, 0, 0, -10, 5};
  c.best[0].fitness = fitness[0];
  c.best[1].fitness = fitness[1];
  for (int i = 0; i < 5; ++i) c.novel[static_cast<std::size_t>(i)].fitness = fitness[i + 2];
  const ClassifierId k16 = c.best[0].classifier;
  const ClassifierId k5 = c.novel[4].classifier;
  c.experience = 141;
  const EvolutionReport r = evolve_cell(s, 0, EvoParams{});
  EXPECT_EQ(r.kept, (std::vector<ClassifierId>{k16, k5}));
  EXPECT_EQ(s.cell(0).best[0].fitness, 16.0);
  EXPECT_EQ(s.cell(0).best[1].fitness, 5.0);
  EXPECT_EQ(s.cell(0).best.size(), 2u);
  EXPECT_EQ(s.cell(0).novel.size(), 5u);
  EXPECT_EQ(s.cell(0).experience, 0u);
  EXPECT_EQ(s.cell(0).generation, 1u);
  EXPECT_EQ(r.discarded.size(), 5u);
  EXPECT_EQ(r.indexed.size() + r.created.size(), 5u);
  for (const Slot& slot : s.cell(0).novel) EXPECT_EQ(slot.fitness, 0.0);
  EXPECT_TRUE(numerosity_violations(s).empty());
}

TEST(EvolveCell, TiesPreferOlderSlots) {
  SocSystem s = make(1, 1);
  s.ensure_cell_initialized(0);
  CellState& c = s.cell(0);
  // Novel slots are created before best slots, so the oldest two are novel[0..1].
  std::vector<Slot> all(c.novel.begin(), c.novel.end());
  all.insert(all.end(), c.best.begin(), c.best.end());
  std::sort(all.begin(), all.end(), [](const Slot& a, const Slot& b) { return a.serial < b.serial; });
  const EvolutionReport r = evolve_cell(s, 0, EvoParams{});
  EXPECT_EQ(r.kept, (std::vector<ClassifierId>{all[0].classifier, all[1].classifier}));
}

TEST(EvolveCell, SoleIndexIsDeleted) {
  SocSystem s = make(2, 1);
  s.ensure_cell_initialized(0);
  s.ensure_cell_initialized(1);
  CellState& c = s.cell(0);
  c.best[0].fitness = 10;
  c.best[1].fitness = 9;
  const ClassifierId loner = c.novel[0].classifier;
  const ClassifierId shared = c.novel[1].classifier;
  s.add_index(1, Group::Novel, shared);
  EvoParams p;
  p.indexing_probability = 0.0;  // no new slot can re-index either of them
  evolve_cell(s, 0, p);
  EXPECT_FALSE(s.store().contains(loner));
  ASSERT_TRUE(s.store().contains(shared));
  EXPECT_EQ(s.store().get(shared).numerosity, 1);
  EXPECT_TRUE(numerosity_violations(s).empty());
}

TEST(EvolveCell, BestMultisetIsTopBetaOfBefore) {
  SocSystem s = make(3, 3, 4);
  Rng rng(4);
  for (int c = 0; c < 9; ++c) s.ensure_cell_initialized(c);
  for (int round = 0; round < 300; ++round) {
    const int cell = static_cast<int>(uniform_index(rng, 9));
    std::vector<double> before;
    for (auto* g : {&s.cell(cell).best, &s.cell(cell).novel}) {
      for (Slot& slot : *g) {
        slot.fitness = std::round(uniform<double>(rng, -5, 5));
        before.push_back(slot.fitness);
      }
    }
    std::sort(before.rbegin(), before.rend());
    EvoParams p;
    p.operator_mode = round % 2 ? OperatorMode::Mixed : OperatorMode::Global;
    evolve_cell(s, cell, p);
    std::vector<double> after;
    for (const Slot& slot : s.cell(cell).best) after.push_back(slot.fitness);
    std::sort(after.rbegin(), after.rend());
    ASSERT_EQ(after, std::vector<double>(before.begin(), before.begin() + 2));
    ASSERT_TRUE(numerosity_violations(s).empty());
  }
}

TEST(EvolveCell, AllIndexingOrAllReproduction) {
  SocSystem s = make(2, 2);
  for (int c = 0; c < 4; ++c) s.ensure_cell_initialized(c);
  EvoParams p;
  p.indexing_probability = 1.0;
  auto r = evolve_cell(s, 0, p);
  EXPECT_EQ(r.indexed.size(), 5u);
  EXPECT_TRUE(r.created.empty());
  p.indexing_probability = 0.0;
  const auto size = s.store().size();
  r = evolve_cell(s, 1, p);
  EXPECT_EQ(r.created.size(), 5u);
  for (ClassifierId id : r.created) EXPECT_EQ(s.store().get(id).numerosity, 1);
  EXPECT_EQ(s.store().size(), size);  // five discarded singletons, five offspring
}

TEST(EvolveCell, IndexingFrequencyIsHalf) {
  SocSystem s = make(3, 3, 12);
  for (int c = 0; c < 9; ++c) s.ensure_cell_initialized(c);
  Rng rng(12);
  std::size_t indexed = 0;
  std::size_t total = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto r = evolve_cell(s, static_cast<int>(uniform_index(rng, 9)), EvoParams{});
    indexed += r.indexed.size();
    total += r.indexed.size() + r.created.size();
  }
  EXPECT_NEAR(indexed / double(total), 0.5, 0.02);
  EXPECT_TRUE(numerosity_violations(s).empty());
}

TEST(EvoParams, ValidateRejectsOutOfRange) {
  EvoParams p;
  p.crossover_rate = 1.5;
  EXPECT_THROW(p.validate(), ContractViolation);
  p = EvoParams{};
  p.indexing_probability = -0.1;
  EXPECT_THROW(p.validate(), ContractViolation);
}

}  // namespace
}  // namespace soc
