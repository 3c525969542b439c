#pragma once

// CSV and SVG artifacts produced by experiment runs.

#include <filesystem>
#include <string>
#include <vector>

#include "soc/harness.hpp"

namespace soc {

void write_trial_log(const std::filesystem::path& path, const std::vector<TrialRecord>& log);
void write_series(const std::filesystem::path& path, const PerformanceSeries& series);
void write_curve(const std::filesystem::path& path, const std::vector<long>& trials,
                 const std::vector<double>& mean, const std::vector<double>& stddev);
void write_block_map(const std::filesystem::path& path, const BlockMap& map);
void write_events(const std::filesystem::path& path, const std::vector<EvolutionReport>& events);

struct Curve {
  std::string label;
  std::vector<long> trials;
  std::vector<double> values;
};

void write_curve_svg(const std::filesystem::path& path, const std::vector<Curve>& curves,
                     const std::string& title);
void write_map_svg(const std::filesystem::path& path, const MazeSpec& maze, const BlockMap& map,
                   const std::string& title);

/// Writes everything a `run` produces into `dir`:
///   config.txt, summary.txt, curve.csv, curve.svg, and per replicate
///   replicate_NNN/{trials.csv, performance.csv, snapshot.txt, events.csv},
///   plus behavior/fitness maps of replicate 0 on the final active maze.
void write_run_outputs(const std::filesystem::path& dir, const ExperimentConfig& config,
                       const ReplicateSummary& summary);

/// Mean curve as written by write_curve.
Curve read_curve(const std::filesystem::path& path);
/// Per-replicate final performances from a run directory's summary.txt.
std::vector<double> read_final_performances(const std::filesystem::path& run_dir);

}  // namespace soc
