#pragma once

// Flat key-value experiment configuration:
//
//   # comment
//   maze_schedule = mazes/maze3a.txt, mazes/maze3b.txt
//   period = 10000
//   algorithm = SSOC2
//
// Relative maze paths resolve against the config file's directory.

#include <filesystem>
#include <string>
#include <string_view>

#include "soc/harness.hpp"

namespace soc {

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one key (as named in a config file) to `config`. Throws ConfigError
/// on unknown keys or malformed values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

/// Reloads `config.env.schedule` from `config.maze_paths`.
void load_schedule(ExperimentConfig& config, const std::filesystem::path& base_dir);

std::string to_string(Algorithm a);
std::string to_string(OperatorMode m);
std::string to_string(Alternation a);
Algorithm parse_algorithm(std::string_view s);
OperatorMode parse_operator_mode(std::string_view s);
Alternation parse_alternation(std::string_view s);

/// Serializes every key understood by parse_config.
std::string format_config(const ExperimentConfig& config);

}  // namespace soc
