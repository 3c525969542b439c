#include "soc/harness.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "soc/error.hpp"

namespace soc {

void ExperimentConfig::validate() const {
  env.validate();
  soc.validate();
  evo.validate();
  if (grid_width <= 0 || grid_height <= 0) throw ConfigError("grid size must be positive");
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (total_trials <= PerformanceSeries::kWindow) {
    throw ConfigError("total_trials must exceed " + std::to_string(PerformanceSeries::kWindow));
  }
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

TrialOutcome run_trial(SocSystem& system, Environment& env, AlternationState& alternation,
                       const EvoParams& evo, const TrialHooks* hooks) {
  env.reset();
  TrialOutcome outcome;
  const bool per_trial = alternation.kind == Alternation::PerTrial;
  if (per_trial) outcome.mode = alternation.mode();

  std::optional<PendingUpdate> pending;
  double pending_reward = 0.0;
  auto update = [&](const PendingUpdate& p, double reward, std::optional<int> next) {
    const auto fitness = apply_update(system, p, reward, next);
    if (hooks && hooks->on_update) hooks->on_update(p, reward, next, fitness);
  };

  for (;;) {
    const Observation obs = env.observe();
    const Activation act = system.activate(obs, alternation.mode());
    if (!per_trial) alternation.explore_next = !alternation.explore_next;
    if (hooks && hooks->on_activation) hooks->on_activation(act, obs);

    const Transition tr = env.step(act.action);
    ++outcome.steps;
    if (pending) update(*pending, pending_reward, act.cell);

    const PendingUpdate current = make_pending(system, act, obs);
    if (tr.done) {
      update(current, tr.reward, std::nullopt);
      pending.reset();
    } else {
      pending = current;
      pending_reward = tr.reward;
    }

    if (should_evolve(system, act.cell)) {
      const EvolutionReport report = evolve_cell(system, act.cell, evo);
      if (hooks && hooks->on_evolution) hooks->on_evolution(report);
    }
    if (tr.done) {
      outcome.reached_goal = tr.reward == env.config().reward_goal;
      break;
    }
  }
  if (per_trial) alternation.explore_next = !alternation.explore_next;
  env.advance_trial();
  return outcome;
}

void PerformanceSeries::push(long trial, int steps) {
  trials_.push_back(trial);
  steps_.push_back(steps);
  window_sum_ += steps;
  if (steps_.size() > static_cast<std::size_t>(kWindow)) {
    window_sum_ -= steps_[steps_.size() - 1 - kWindow];
  }
  const auto n = std::min<std::size_t>(steps_.size(), kWindow);
  average_.push_back(static_cast<double>(window_sum_) / static_cast<double>(n));
}

double PerformanceSeries::final_performance() const {
  if (average_.empty()) throw ContractViolation("PerformanceSeries: empty series");
  return average_.back();
}

SomParams<double> som_params(const ExperimentConfig& config) {
  const SomMode mode =
      config.algorithm == Algorithm::SSOC2 ? SomMode::Parameterless : SomMode::Classic;
  return SomParams<double>::for_grid(config.grid_width, config.grid_height, mode,
                                     config.theta_max_rule, config.theta_max_value);
}

SocSystem make_system(const ExperimentConfig& config, std::uint64_t seed) {
  return SocSystem::create(config.grid_width, config.grid_height, config.soc, som_params(config),
                           seed);
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  ExperimentResult result{seed, {}, {}, make_system(config, seed), 0, {}};
  Environment env(config.env, make_stream(seed, Stream::Environment));
  AlternationState alternation{config.alternation, true};

  TrialHooks hooks;
  if (config.diagnostics) {
    hooks.on_evolution = [&](const EvolutionReport& r) { result.evolution_events.push_back(r); };
  }
  result.log.reserve(static_cast<std::size_t>(config.total_trials));
  for (long t = 0; t < config.total_trials; ++t) {
    const int state = env.active_state_index();
    const TrialOutcome out =
        run_trial(result.system, env, alternation, config.evo, config.diagnostics ? &hooks : nullptr);
    TrialRecord rec;
    rec.trial = t + 1;
    rec.steps = out.steps;
    rec.maze_state = state;
    rec.exploit_trial = out.mode == ActivationMode::Exploit;
    rec.counted = !out.mode || *out.mode == ActivationMode::Exploit;
    if (rec.counted) result.performance.push(rec.trial, rec.steps);
    result.log.push_back(rec);
  }
  result.dropped_updates = result.system.dropped_updates();
  return result;
}

std::vector<double> ReplicateSummary::final_performances() const {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& r : runs) out.push_back(r.performance.final_performance());
  return out;
}

double ReplicateSummary::mean_final_performance() const {
  const auto f = final_performances();
  return std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
}

ReplicateSummary run_replicates(const ExperimentConfig& config, int threads) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.replicates);
  std::vector<std::optional<ExperimentResult>> slots(n);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(run_experiment(config, config.seed + i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  ReplicateSummary summary;
  for (auto& s : slots) summary.runs.push_back(std::move(*s));
  const auto& first = summary.runs.front().performance;
  std::size_t points = first.size();
  for (const auto& r : summary.runs) points = std::min(points, r.performance.size());
  summary.trials.assign(first.trials().begin(),
                        first.trials().begin() + static_cast<std::ptrdiff_t>(points));
  summary.mean.resize(points);
  summary.stddev.resize(points);
  const double count = static_cast<double>(summary.runs.size());
  for (std::size_t i = 0; i < points; ++i) {
    double sum = 0.0;
    for (const auto& r : summary.runs) sum += r.performance.moving_average()[i];
    const double mean = sum / count;
    double sq = 0.0;
    for (const auto& r : summary.runs) {
      const double d = r.performance.moving_average()[i] - mean;
      sq += d * d;
    }
    summary.mean[i] = mean;
    summary.stddev[i] = summary.runs.size() > 1 ? std::sqrt(sq / (count - 1.0)) : 0.0;
  }
  return summary;
}

namespace {

template <typename Sampler>
BlockMap sample_map(const MazeSpec& maze, const Eigen::Vector2d& extent, Rng& rng, int samples,
                    std::vector<std::string> channels, Sampler&& sample) {
  const auto h = maze.height();
  const auto w = maze.width();
  BlockMap map;
  map.channels = std::move(channels);
  map.layers.assign(map.channels.size(), Eigen::MatrixXd::Zero(h, w));
  map.valid.setConstant(h, w, false);
  Eigen::VectorXd acc(static_cast<Eigen::Index>(map.channels.size()));
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      if (maze.tile(col, row) == Tile::Wall) continue;
      acc.setZero();
      int hits = 0;
      for (int s = 0; s < samples; ++s) {
        const Eigen::Vector2d p(col + uniform<double>(rng, 0.0, 1.0),
                                row + uniform<double>(rng, 0.0, 1.0));
        if (sample(normalize_position(p, extent), acc)) ++hits;
      }
      if (hits == 0) continue;
      map.valid(row, col) = true;
      for (std::size_t c = 0; c < map.layers.size(); ++c) {
        map.layers[c](row, col) = acc[static_cast<Eigen::Index>(c)] / hits;
      }
    }
  }
  return map;
}

}  // namespace

BlockMap sample_behavior_map(const SocSystem& system, const MazeSpec& maze,
                             const Eigen::Vector2d& extent, Rng& rng, int samples) {
  return sample_map(maze, extent, rng, samples, {"dx", "dy"},
                    [&](const Observation& o, Eigen::VectorXd& acc) {
                      const auto a = system.peek(o, ActivationMode::Exploit, rng);
                      if (!a) return false;
                      acc += a->action;
                      return true;
                    });
}

BlockMap sample_fitness_map(const SocSystem& system, const MazeSpec& maze,
                            const Eigen::Vector2d& extent, Rng& rng, int samples) {
  return sample_map(maze, extent, rng, samples, {"fitness"},
                    [&](const Observation& o, Eigen::VectorXd& acc) {
                      const int winner = system.grid().find_winner(o);
                      if (!system.cell(winner).initialized) return false;
                      acc[0] += max_best_fitness(system, winner);
                      return true;
                    });
}

}  // namespace soc
