// soc: run experiments, sample maps from snapshots, compare run directories.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "soc/config.hpp"
#include "soc/error.hpp"
#include "soc/harness.hpp"
#include "soc/output.hpp"
#include "soc/snapshot.hpp"
#include "soc/stats.hpp"

namespace {

int fail(const std::string& kind, const std::string& message) {
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') escaped.push_back('\\');
    escaped.push_back(c == '\n' ? ' ' : c);
  }
  std::cerr << "error: kind=" << kind << " message=\"" << escaped << "\"\n";
  return 2;
}

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> replicates;
  std::optional<std::string> algorithm;
  std::optional<std::string> op;
  std::optional<long> trials;
  std::optional<std::string> grid;
  std::optional<double> gamma;
  std::optional<double> noise;
  std::optional<std::string> alternation;
  std::optional<int> threads;
  std::vector<std::string> settings;
};

int cmd_run(const RunOptions& o) {
  soc::ExperimentConfig config = soc::load_config(o.config);
  if (o.seed) config.seed = *o.seed;
  if (o.out) config.output_directory = *o.out;
  if (o.replicates) config.replicates = *o.replicates;
  if (o.algorithm) config.algorithm = soc::parse_algorithm(*o.algorithm);
  if (o.op) config.evo.operator_mode = soc::parse_operator_mode(*o.op);
  if (o.trials) config.total_trials = *o.trials;
  if (o.grid) soc::apply_setting(config, "grid_size", *o.grid);
  if (o.gamma) config.soc.gamma = *o.gamma;
  if (o.noise) config.env.noise_fraction = *o.noise;
  if (o.alternation) config.alternation = soc::parse_alternation(*o.alternation);
  if (o.threads) config.threads = *o.threads;
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw soc::ConfigError("--set expects key=value, got " + kv);
    soc::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1),
                       std::filesystem::current_path());
  }
  config.validate();

  const auto summary = soc::run_replicates(config, config.threads);
  soc::write_run_outputs(config.output_directory, config, summary);
  std::printf("replicates=%zu mean_final_performance=%.4f out=%s\n", summary.runs.size(),
              summary.mean_final_performance(), config.output_directory.c_str());
  return 0;
}

int cmd_map(const std::string& snapshot_path, const std::string& maze_path,
            const std::string& kind, const std::optional<std::string>& out, int samples,
            std::uint64_t seed) {
  const soc::Snapshot snap = soc::load_snapshot(snapshot_path);
  const soc::MazeSpec maze = soc::load_maze_file(maze_path);
  soc::Rng rng = soc::make_stream(seed, soc::Stream::Sampling);
  soc::BlockMap map;
  if (kind == "behavior") {
    map = soc::sample_behavior_map(snap.system, maze, snap.extent, rng, samples);
  } else if (kind == "fitness") {
    map = soc::sample_fitness_map(snap.system, maze, snap.extent, rng, samples);
  } else {
    throw soc::ConfigError("--kind must be behavior or fitness");
  }
  const std::filesystem::path target = out ? *out : "/dev/stdout";
  soc::write_block_map(target, map);
  if (out) {
    auto svg = std::filesystem::path(*out).replace_extension(".svg");
    soc::write_map_svg(svg, maze, map, kind + " map");
  }
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b) {
  const auto fa = soc::read_final_performances(a);
  const auto fb = soc::read_final_performances(b);
  const auto ca = soc::read_curve(std::filesystem::path(a) / "curve.csv");
  const auto cb = soc::read_curve(std::filesystem::path(b) / "curve.csv");
  const auto cmp = soc::compare_paired(fa, fb);
  const double ma = soc::mean_of(fa);
  const double mb = soc::mean_of(fb);
  std::printf("a=%s replicates=%zu mean_final_performance=%.4f\n", a.c_str(), fa.size(), ma);
  std::printf("b=%s replicates=%zu mean_final_performance=%.4f\n", b.c_str(), fb.size(), mb);
  std::printf("difference_a_minus_b=%.4f\n", ma - mb);
  std::printf("paired a_lower=%d a_higher=%d ties=%d sign_test_p=%.6g\n", cmp.lower, cmp.higher,
              cmp.ties, cmp.p_value);
  if (!ca.values.empty() && !cb.values.empty()) {
    std::printf("final_curve a=%.4f b=%.4f\n", ca.values.back(), cb.values.back());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-organizing classifier experiments"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run replicated experiments from a config file");
  run_cmd->add_option("config", run.config, "Config file")->required();
  run_cmd->add_option("--seed", run.seed, "Base seed (replicate i uses seed + i)");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--replicates", run.replicates, "Number of replicates");
  run_cmd->add_option("--algorithm", run.algorithm, "SSOC2 or SSOC");
  run_cmd->add_option("--operator", run.op, "global or mixed");
  run_cmd->add_option("--trials", run.trials, "Total trials per replicate");
  run_cmd->add_option("--grid", run.grid, "SOM lattice size, WxH");
  run_cmd->add_option("--gamma", run.gamma, "Discount factor");
  run_cmd->add_option("--noise", run.noise, "Observation noise fraction");
  run_cmd->add_option("--alternation", run.alternation, "per_step or per_trial");
  run_cmd->add_option("--threads", run.threads, "Replicates run concurrently");
  run_cmd->add_option("--set", run.settings, "Extra config setting, key=value (repeatable)");

  std::string snapshot, maze, kind = "behavior";
  std::optional<std::string> map_out;
  int samples = 100;
  std::uint64_t map_seed = 1;
  auto* map_cmd = app.add_subcommand("map", "Sample a behavior or fitness map from a snapshot");
  map_cmd->add_option("snapshot", snapshot, "Snapshot file")->required();
  map_cmd->add_option("maze", maze, "Maze file")->required();
  map_cmd->add_option("--kind", kind, "behavior or fitness");
  map_cmd->add_option("--out", map_out, "CSV output path (an SVG is written next to it)");
  map_cmd->add_option("--samples", samples, "Samples per 1x1 block");
  map_cmd->add_option("--seed", map_seed, "Sampling seed");

  std::string dir_a, dir_b;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare two run directories");
  cmp_cmd->add_option("a", dir_a, "First run directory")->required();
  cmp_cmd->add_option("b", dir_b, "Second run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what());
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*map_cmd) return cmd_map(snapshot, maze, kind, map_out, samples, map_seed);
    if (*cmp_cmd) return cmd_compare(dir_a, dir_b);
  } catch (const soc::ParseError& e) {
    return fail("parse", e.what());
  } catch (const soc::ConfigError& e) {
    return fail("config", e.what());
  } catch (const soc::IoError& e) {
    return fail("io", e.what());
  } catch (const soc::ContractViolation& e) {
    return fail("contract", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
