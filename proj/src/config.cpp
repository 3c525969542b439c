#include "soc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "soc/error.hpp"

namespace soc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + std::string(value) + "' for key " + std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string v = lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean '" + std::string(value) + "' for key " + std::string(key));
}

std::string theta_max_text(const ExperimentConfig& c) {
  switch (c.theta_max_rule) {
    case ThetaMaxRule::Area:
      return "area";
    case ThetaMaxRule::Side:
      return "side";
    case ThetaMaxRule::Fixed:
      break;
  }
  std::ostringstream out;
  out.precision(17);
  out << c.theta_max_value;
  return out.str();
}

}  // namespace

std::string to_string(Algorithm a) { return a == Algorithm::SSOC2 ? "SSOC2" : "SSOC"; }
std::string to_string(OperatorMode m) { return m == OperatorMode::Global ? "global" : "mixed"; }
std::string to_string(Alternation a) {
  return a == Alternation::PerStep ? "per_step" : "per_trial";
}

Algorithm parse_algorithm(std::string_view s) {
  const std::string v = lower(s);
  if (v == "ssoc2") return Algorithm::SSOC2;
  if (v == "ssoc") return Algorithm::SSOC;
  throw ConfigError("unknown algorithm '" + std::string(s) + "'");
}

OperatorMode parse_operator_mode(std::string_view s) {
  const std::string v = lower(s);
  if (v == "global") return OperatorMode::Global;
  if (v == "mixed") return OperatorMode::Mixed;
  throw ConfigError("unknown operator_mode '" + std::string(s) + "'");
}

Alternation parse_alternation(std::string_view s) {
  const std::string v = lower(s);
  if (v == "per_step" || v == "perstep") return Alternation::PerStep;
  if (v == "per_trial" || v == "pertrial") return Alternation::PerTrial;
  throw ConfigError("unknown explore_alternation '" + std::string(s) + "'");
}

void load_schedule(ExperimentConfig& config, const std::filesystem::path& base_dir) {
  config.env.schedule.states.clear();
  for (auto& p : config.maze_paths) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    config.env.schedule.states.push_back(load_maze_file(path));
    p = path.string();
  }
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir) {
  key = trim(key);
  value = trim(value);
  if (key == "maze_schedule") {
    config.maze_paths.clear();
    std::size_t start = 0;
    while (start <= value.size()) {
      std::size_t end = value.find(',', start);
      if (end == std::string_view::npos) end = value.size();
      const auto item = trim(value.substr(start, end - start));
      if (!item.empty()) config.maze_paths.emplace_back(item);
      start = end + 1;
    }
    if (config.maze_paths.empty()) throw ConfigError("maze_schedule lists no mazes");
    load_schedule(config, base_dir);
  } else if (key == "period") {
    config.env.schedule.period = parse_number<int>(key, value);
  } else if (key == "algorithm") {
    config.algorithm = parse_algorithm(value);
  } else if (key == "grid_size") {
    const auto x = value.find_first_of("xX");
    if (x == std::string_view::npos) throw ConfigError("grid_size must look like WxH");
    config.grid_width = parse_number<int>(key, trim(value.substr(0, x)));
    config.grid_height = parse_number<int>(key, trim(value.substr(x + 1)));
  } else if (key == "theta_max") {
    const std::string v = lower(value);
    if (v == "area") {
      config.theta_max_rule = ThetaMaxRule::Area;
    } else if (v == "side") {
      config.theta_max_rule = ThetaMaxRule::Side;
    } else {
      config.theta_max_rule = ThetaMaxRule::Fixed;
      config.theta_max_value = parse_number<double>(key, value);
      if (!(config.theta_max_value >= 1.0)) throw ConfigError("theta_max must be at least 1");
    }
  } else if (key == "gamma") {
    config.soc.gamma = parse_number<double>(key, value);
  } else if (key == "operator_mode") {
    config.evo.operator_mode = parse_operator_mode(value);
  } else if (key == "total_trials") {
    config.total_trials = parse_number<long>(key, value);
  } else if (key == "replicates") {
    config.replicates = parse_number<int>(key, value);
  } else if (key == "rng_seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "output_directory") {
    config.output_directory = std::string(value);
  } else if (key == "explore_alternation") {
    config.alternation = parse_alternation(value);
  } else if (key == "diagnostics") {
    config.diagnostics = parse_bool(key, value);
  } else if (key == "noise_fraction") {
    config.env.noise_fraction = parse_number<double>(key, value);
  } else if (key == "max_includes_novel") {
    config.soc.max_includes_novel = parse_bool(key, value);
  } else if (key == "threads") {
    config.threads = parse_number<int>(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(config, view.substr(0, eq), view.substr(eq + 1), base_dir);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "maze_schedule = ";
  for (std::size_t i = 0; i < c.maze_paths.size(); ++i) {
    out << (i ? ", " : "") << c.maze_paths[i];
  }
  out << "\nperiod = " << c.env.schedule.period << "\nalgorithm = " << to_string(c.algorithm)
      << "\ngrid_size = " << c.grid_width << 'x' << c.grid_height
      << "\ntheta_max = " << theta_max_text(c)
      << "\ngamma = " << c.soc.gamma
      << "\nmax_includes_novel = " << (c.soc.max_includes_novel ? "true" : "false")
      << "\noperator_mode = " << to_string(c.evo.operator_mode)
      << "\ntotal_trials = " << c.total_trials << "\nreplicates = " << c.replicates
      << "\nrng_seed = " << c.seed << "\noutput_directory = " << c.output_directory
      << "\nexplore_alternation = " << to_string(c.alternation)
      << "\ndiagnostics = " << (c.diagnostics ? "true" : "false")
      << "\nnoise_fraction = " << c.env.noise_fraction << "\nthreads = " << c.threads << '\n';
  return out.str();
}

}  // namespace soc
