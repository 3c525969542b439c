#include "properties.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "oracles.hpp"
#include "soc/credit.hpp"
#include "soc/evolution.hpp"
#include "soc/harness.hpp"
#include "soc/maze.hpp"
#include "soc/snapshot.hpp"

namespace soc::props {

namespace {

Result make(std::string name, bool ok, const std::ostringstream& detail) {
  return {std::move(name), ok, detail.str()};
}

Grid random_grid(int w, int h, Rng& rng) {
  return Grid::random(w, h, SomParams<double>::for_grid(w, h), rng);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::string snapshot_text(const SocSystem& system) {
  std::ostringstream out;
  write_snapshot(out, system, Eigen::Vector2d(1, 1));
  return out.str();
}

}  // namespace

Result winner_matches_brute_force(std::uint64_t seed, int instances) {
  Rng rng(seed);
  int mismatches = 0;
  for (int n = 0; n < instances; ++n) {
    const int w = 1 + static_cast<int>(uniform_index(rng, 12));
    const int h = 1 + static_cast<int>(uniform_index(rng, 12));
    const Grid grid = random_grid(w, h, rng);
    const Observation x(uniform<double>(rng, 0, 1), uniform<double>(rng, 0, 1));
    std::vector<std::vector<double>> weights;
    for (int c = 0; c < grid.cell_count(); ++c) {
      weights.push_back({grid.weight(c)(0), grid.weight(c)(1)});
    }
    if (grid.find_winner(x) != oracle::brute_force_winner(weights, {x(0), x(1)})) ++mismatches;
  }
  std::ostringstream d;
  d << mismatches << " mismatches over " << instances << " instances";
  return make("winner equals brute-force argmin", mismatches == 0, d);
}

Result plsom_rate_bounds(std::uint64_t seed, int updates) {
  Rng rng(seed);
  Grid grid = random_grid(6, 4, rng);
  bool ok = true;
  std::ostringstream d;
  const Observation first(uniform<double>(rng, 0, 1), uniform<double>(rng, 0, 1));
  const double eps0 = grid.plsom_learning_rate(first, grid.find_winner(first)).epsilon;
  if (eps0 != 1.0) {
    ok = false;
    d << "first epsilon " << eps0 << "; ";
  }
  grid.update(first);
  double prev_r = grid.max_error();
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < updates; ++i) {
    // Inputs drift and occasionally jump so the maximum error keeps moving.
    const double spread = i % 97 == 0 ? 1.0 : 0.3;
    const Observation x(uniform<double>(rng, 0, spread), uniform<double>(rng, 0, spread));
    const double eps = grid.plsom_learning_rate(x, grid.find_winner(x)).epsilon;
    lo = std::min(lo, eps);
    hi = std::max(hi, eps);
    if (!(eps >= 0.0 && eps <= 1.0)) ok = false;
    grid.update(x);
    if (grid.max_error() < prev_r) ok = false;
    prev_r = grid.max_error();
  }
  d << "epsilon range [" << lo << ", " << hi << "], final max_error " << prev_r;
  return make("epsilon(0)=1, epsilon in [0,1], max_error monotone", ok, d);
}

Result first_update_lands_on_input(std::uint64_t seed, int instances) {
  Rng rng(seed);
  int misses = 0;
  for (int n = 0; n < instances; ++n) {
    Grid grid = random_grid(1 + static_cast<int>(uniform_index(rng, 10)),
                            1 + static_cast<int>(uniform_index(rng, 10)), rng);
    const Observation x(uniform<double>(rng, 0, 1), uniform<double>(rng, 0, 1));
    const int winner = grid.update(x);
    if (!(grid.weight(winner) == x)) ++misses;
  }
  std::ostringstream d;
  d << misses << " of " << instances << " winners not exactly on the input";
  return make("first parameterless update maps winner onto input", misses == 0, d);
}

Result numerosity_audit(std::uint64_t seed, int operations) {
  Rng rng(seed);
  SocSystem system(random_grid(4, 4, rng), SocParams{}, seed);
  const EvoParams evo{};
  int violations_seen = 0;
  int first_bad_op = -1;
  for (int op = 0; op < operations; ++op) {
    const int cell = static_cast<int>(uniform_index(rng, 16));
    const Group group = bernoulli(rng, 0.5) ? Group::Best : Group::Novel;
    auto& slots = system.cell(cell).group(group);
    switch (uniform_index(rng, 6)) {
      case 0:
        system.ensure_cell_initialized(cell);
        break;
      case 1:
        system.add_classifier(cell, group, system.random_genes(rng));
        break;
      case 2:
        if (system.store().size() > 0) {
          system.add_index(cell, group,
                           system.store().at(uniform_index(rng, system.store().size())).id);
        }
        break;
      case 3:
        if (slots.size() > 1) system.remove_slot(cell, group, uniform_index(rng, slots.size()));
        break;
      case 4:
        if (system.cell(cell).initialized) evolve_cell(system, cell, evo);
        break;
      default: {
        const Observation x(uniform<double>(rng, 0, 1), uniform<double>(rng, 0, 1));
        system.activate(x, bernoulli(rng, 0.5) ? ActivationMode::Explore : ActivationMode::Exploit);
      }
    }
    if (!numerosity_violations(system).empty()) {
      ++violations_seen;
      if (first_bad_op < 0) first_bad_op = op;
    }
  }
  std::ostringstream d;
  d << operations << " operations, store size " << system.store().size() << ", "
    << violations_seen << " audits failed";
  if (first_bad_op >= 0) d << " (first at op " << first_bad_op << ")";
  return make("numerosity equals slot count after random operations", violations_seen == 0, d);
}

Result niched_fitness_isolation(std::uint64_t seed, int trials) {
  Rng rng(seed);
  int leaks = 0;
  for (int t = 0; t < trials; ++t) {
    SocSystem system(random_grid(3, 3, rng), SocParams{}, seed + static_cast<std::uint64_t>(t));
    for (int c = 0; c < 9; ++c) system.ensure_cell_initialized(c);
    // Share one classifier between cell a's best group and several other cells.
    const int a = static_cast<int>(uniform_index(rng, 9));
    const ClassifierId k = system.cell(a).best[0].classifier;
    for (int c = 0; c < 9; ++c) {
      if (c != a) system.add_index(c, bernoulli(rng, 0.5) ? Group::Best : Group::Novel, k);
    }
    for (int c = 0; c < 9; ++c) {
      for (auto* g : {&system.cell(c).best, &system.cell(c).novel}) {
        for (Slot& s : *g) s.fitness = uniform<double>(rng, -50, 500);
      }
    }
    std::vector<double> before;
    for (int c = 0; c < 9; ++c) {
      for (const Slot& s : system.cell(c).best) before.push_back(s.fitness);
      for (const Slot& s : system.cell(c).novel) before.push_back(s.fitness);
    }
    const Activation act{a, Group::Best, 0, system.genes_of(k)};
    const auto pending = make_pending(system, act, Observation(0.5, 0.5));
    apply_update(system, pending, -10.0, static_cast<int>(uniform_index(rng, 9)));
    std::size_t i = 0;
    for (int c = 0; c < 9; ++c) {
      for (auto* g : {&system.cell(c).best, &system.cell(c).novel}) {
        for (std::size_t s = 0; s < g->size(); ++s, ++i) {
          const bool target = c == a && g == &system.cell(a).best && s == 0;
          if (!target && !same_bits((*g)[s].fitness, before[i])) ++leaks;
        }
      }
    }
  }
  std::ostringstream d;
  d << leaks << " foreign slots changed over " << trials << " updates";
  return make("niched fitness isolation", leaks == 0, d);
}

Result fitness_update_arithmetic(std::uint64_t seed, int tuples) {
  Rng rng(seed);
  double worst = 0.0;
  for (int n = 0; n < tuples; ++n) {
    SocParams params;
    params.eta = uniform<double>(rng, 0.01, 1.0);
    params.gamma = uniform<double>(rng, 0.0, 0.999);
    SocSystem system(random_grid(2, 1, rng), params, seed + static_cast<std::uint64_t>(n));
    system.ensure_cell_initialized(0);
    system.ensure_cell_initialized(1);
    double next_max = -1e300;
    for (auto* g : {&system.cell(1).best, &system.cell(1).novel}) {
      for (Slot& s : *g) {
        s.fitness = uniform<double>(rng, -200, 1000);
        next_max = std::max(next_max, s.fitness);
      }
    }
    const double f0 = uniform<double>(rng, -200, 1000);
    system.cell(0).novel[2].fitness = f0;
    const double rewards[] = {1000.0, -20.0, -10.0, uniform<double>(rng, -100, 100)};
    const double reward = rewards[uniform_index(rng, 4)];
    const bool terminal = bernoulli(rng, 0.25);
    const Activation act{0, Group::Novel, 2, system.genes_of(system.cell(0).novel[2].classifier)};
    const auto got = apply_update(system, make_pending(system, act, Observation(0.1, 0.1)), reward,
                                  terminal ? std::nullopt : std::optional<int>(1));
    const double want = oracle::scalar_fitness_update(
        f0, reward, params.gamma, params.eta,
        terminal ? std::nullopt : std::optional<double>(next_max));
    worst = std::max(worst, got ? std::abs(*got - want) : 1e300);
  }
  std::ostringstream d;
  d << "max |library - scalar| = " << worst << " over " << tuples << " tuples";
  return make("fitness update arithmetic vs scalar reference", worst <= 1e-12, d);
}

Result de_offspring_in_box(std::uint64_t seed, int draws) {
  Rng rng(seed);
  SocSystem system(random_grid(4, 4, rng), SocParams{}, seed);
  for (int c = 0; c < 16; ++c) system.ensure_cell_initialized(c);
  int outside = 0;
  for (int n = 0; n < draws; ++n) {
    EvoParams params;
    params.operator_mode = n % 2 ? OperatorMode::Mixed : OperatorMode::Global;
    params.crossover_rate = uniform<double>(rng, 0, 1);
    const Genes g = de_offspring(system, static_cast<int>(uniform_index(rng, 16)), params, rng);
    if (!(g.array().abs() <= 1.0).all() || !g.allFinite()) ++outside;
  }
  std::ostringstream d;
  d << outside << " of " << draws << " offspring outside [-1,1]^2";
  return make("DE offspring stay in the action box", outside == 0, d);
}

Result de_mutant_arithmetic(std::uint64_t seed, int draws) {
  Rng rng(seed);
  double worst = 0.0;
  for (int n = 0; n < draws; ++n) {
    Genes a, b, c;
    for (int k = 0; k < 2; ++k) {
      a[k] = uniform<double>(rng, -1, 1);
      b[k] = uniform<double>(rng, -1, 1);
      c[k] = uniform<double>(rng, -1, 1);
    }
    const double f = uniform<double>(rng, 0, 1);
    const Genes v = de_mutant(a, b, c, f);
    for (int k = 0; k < 2; ++k) worst = std::max(worst, std::abs(v[k] - (a[k] + f * (b[k] - c[k]))));
  }
  std::ostringstream d;
  d << "max deviation " << worst << " over " << draws << " mutants";
  return make("DE mutant equals a + F(b - c)", worst <= 1e-15, d);
}

Result indexing_frequency(std::uint64_t seed, int evolution_calls) {
  Rng rng(seed);
  SocSystem system(random_grid(4, 4, rng), SocParams{}, seed);
  for (int c = 0; c < 16; ++c) system.ensure_cell_initialized(c);
  long indexed = 0;
  long created = 0;
  for (int n = 0; n < evolution_calls; ++n) {
    const auto report = evolve_cell(system, static_cast<int>(uniform_index(rng, 16)), EvoParams{});
    indexed += static_cast<long>(report.indexed.size());
    created += static_cast<long>(report.created.size());
  }
  const double frac = static_cast<double>(indexed) / static_cast<double>(indexed + created);
  std::ostringstream d;
  d << "indexing fraction " << frac << " over " << indexed + created << " novel slots";
  return make("indexing vs reproduction is 0.5/0.5", std::abs(frac - 0.5) <= 0.02, d);
}

Result rerun_bit_identical(std::uint64_t seed) {
  ExperimentConfig config;
  config.env.schedule.states = {load_maze(
      "..........\n..........\n..........\n..........\n.....G....\n"
      "..........\n..........\n..........\n..........\n..........\n")};
  config.grid_width = 5;
  config.grid_height = 5;
  config.total_trials = 400;
  config.replicates = 1;
  const auto a = run_experiment(config, seed);
  const auto b = run_experiment(config, seed);
  config.diagnostics = true;
  const auto c = run_experiment(config, seed);
  bool same = a.performance.steps() == b.performance.steps() &&
              a.performance.steps() == c.performance.steps();
  same = same && snapshot_text(a.system) == snapshot_text(b.system) &&
         snapshot_text(a.system) == snapshot_text(c.system);
  std::ostringstream d;
  d << "three runs of " << config.total_trials << " trials (one with diagnostics) "
    << (same ? "identical" : "differ");
  return make("bit-identical reruns under a fixed seed", same, d);
}

std::vector<Result> run_all(std::uint64_t seed) {
  return {winner_matches_brute_force(seed),    plsom_rate_bounds(seed + 1),
          first_update_lands_on_input(seed + 2), numerosity_audit(seed + 3),
          niched_fitness_isolation(seed + 4),  fitness_update_arithmetic(seed + 5),
          de_offspring_in_box(seed + 6),       de_mutant_arithmetic(seed + 7),
          indexing_frequency(seed + 8),        rerun_bit_identical(seed + 9)};
}

}  // namespace soc::props
