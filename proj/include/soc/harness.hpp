#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "soc/credit.hpp"
#include "soc/evolution.hpp"
#include "soc/maze.hpp"
#include "soc/population.hpp"

namespace soc {

enum class Algorithm { SSOC2, SSOC };
enum class Alternation { PerStep, PerTrial };

struct ExperimentConfig {
  std::vector<std::string> maze_paths;  // informational; `env.schedule` holds the loaded mazes
  EnvConfig env;
  Algorithm algorithm = Algorithm::SSOC2;
  int grid_width = 10;
  int grid_height = 10;
  ThetaMaxRule theta_max_rule = ThetaMaxRule::Side;
  double theta_max_value = 1.0;  // used by ThetaMaxRule::Fixed
  SocParams soc;
  EvoParams evo;
  long total_trials = 20000;
  int replicates = 20;
  std::uint64_t seed = 1;
  std::string output_directory = "out";
  Alternation alternation = Alternation::PerStep;
  bool diagnostics = false;
  int threads = 1;

  void validate() const;
};

/// Which mode the next activation uses.
struct AlternationState {
  Alternation kind = Alternation::PerStep;
  bool explore_next = true;

  ActivationMode mode() const {
    return explore_next ? ActivationMode::Explore : ActivationMode::Exploit;
  }
};

/// Optional observers for one trial; none of them influence the run.
struct TrialHooks {
  std::function<void(const Activation&, const Observation&)> on_activation;
  std::function<void(const PendingUpdate&, double reward, std::optional<int> next_cell,
                     std::optional<double> new_fitness)>
      on_update;
  std::function<void(const EvolutionReport&)> on_evolution;
};

struct TrialOutcome {
  int steps = 0;
  bool reached_goal = false;
  /// Trial-level mode under PerTrial alternation; nullopt under PerStep.
  std::optional<ActivationMode> mode;
};

TrialOutcome run_trial(SocSystem& system, Environment& env, AlternationState& alternation,
                       const EvoParams& evo, const TrialHooks* hooks = nullptr);

struct TrialRecord {
  long trial = 0;  // 1-based
  int steps = 0;
  int maze_state = 0;
  bool exploit_trial = false;  // PerTrial only
  bool counted = true;         // contributes to the performance metric
};

/// Step counts of the trials that enter the metric, with their trailing
/// 100-entry moving average.
class PerformanceSeries {
 public:
  static constexpr int kWindow = 100;

  void push(long trial, int steps);
  std::size_t size() const noexcept { return steps_.size(); }
  const std::vector<long>& trials() const noexcept { return trials_; }
  const std::vector<int>& steps() const noexcept { return steps_; }
  const std::vector<double>& moving_average() const noexcept { return average_; }
  double final_performance() const;

 private:
  std::vector<long> trials_;
  std::vector<int> steps_;
  std::vector<double> average_;
  long window_sum_ = 0;
};

struct ExperimentResult {
  std::uint64_t seed = 0;
  std::vector<TrialRecord> log;
  PerformanceSeries performance;
  SocSystem system;
  std::uint64_t dropped_updates = 0;
  std::vector<EvolutionReport> evolution_events;  // only with diagnostics
};

SomParams<double> som_params(const ExperimentConfig& config);
SocSystem make_system(const ExperimentConfig& config, std::uint64_t seed);
ExperimentResult run_experiment(const ExperimentConfig& config, std::uint64_t seed);

struct ReplicateSummary {
  std::vector<ExperimentResult> runs;
  std::vector<long> trials;
  std::vector<double> mean;
  std::vector<double> stddev;

  std::vector<double> final_performances() const;
  double mean_final_performance() const;
};

/// Runs replicate i with seed base + i. `threads` > 1 runs replicates
/// concurrently; results do not depend on it.
ReplicateSummary run_replicates(const ExperimentConfig& config, int threads = 1);

/// Per-block averages over a 1x1 tiling of the maze. Layers are indexed
/// (row from the bottom, column); wall blocks and blocks whose samples all hit
/// uninitialized cells are invalid.
struct BlockMap {
  std::vector<std::string> channels;
  std::vector<Eigen::MatrixXd> layers;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> valid;
};

BlockMap sample_behavior_map(const SocSystem& system, const MazeSpec& maze,
                             const Eigen::Vector2d& extent, Rng& rng, int samples = 100);
BlockMap sample_fitness_map(const SocSystem& system, const MazeSpec& maze,
                            const Eigen::Vector2d& extent, Rng& rng, int samples = 100);

}  // namespace soc
