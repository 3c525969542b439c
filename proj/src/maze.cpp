#include "soc/maze.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "soc/error.hpp"

namespace soc {

MazeSpec::MazeSpec(std::string name, int width, int height, std::vector<Tile> tiles)
    : name_(std::move(name)), width_(width), height_(height), tiles_(std::move(tiles)) {
  if (width <= 0 || height <= 0) throw ContractViolation("MazeSpec: non-positive size");
  if (tiles_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ContractViolation("MazeSpec: tile count does not match size");
  }
  if (std::find(tiles_.begin(), tiles_.end(), Tile::Goal) == tiles_.end()) {
    throw ContractViolation("MazeSpec: no goal tile");
  }
  if (std::find(tiles_.begin(), tiles_.end(), Tile::Free) == tiles_.end()) {
    throw ContractViolation("MazeSpec: no free tile");
  }
}

Tile MazeSpec::tile_at(const Eigen::Vector2d& p) const {
  const int col = std::clamp(static_cast<int>(std::floor(p.x())), 0, width_ - 1);
  const int row = std::clamp(static_cast<int>(std::floor(p.y())), 0, height_ - 1);
  return tile(col, row);
}

bool MazeSpec::strictly_in_wall(const Eigen::Vector2d& p) const {
  if (!(p.x() > 0 && p.x() < width_ && p.y() > 0 && p.y() < height_)) return false;
  // Points on a tile edge are not inside any tile's interior.
  if (p.x() == std::floor(p.x()) || p.y() == std::floor(p.y())) return false;
  return tile_at(p) == Tile::Wall;
}

std::string MazeSpec::to_text() const {
  std::string out;
  for (int row = height_ - 1; row >= 0; --row) {
    for (int col = 0; col < width_; ++col) out.push_back(static_cast<char>(tile(col, row)));
    out.push_back('\n');
  }
  return out;
}

MazeSpec load_maze(std::string_view text, std::string name) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("empty maze", 1, 1);

  const int height = static_cast<int>(lines.size());
  const int width = static_cast<int>(lines.front().size());
  if (width == 0) throw ParseError("empty maze row", 1, 1);
  std::vector<Tile> tiles(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  bool goal = false;
  bool free = false;
  for (int line_no = 0; line_no < height; ++line_no) {
    const auto line = lines[static_cast<std::size_t>(line_no)];
    if (static_cast<int>(line.size()) != width) {
      throw ParseError("ragged row: expected " + std::to_string(width) + " columns, found " +
                           std::to_string(line.size()),
                       line_no + 1, static_cast<int>(std::min(line.size(), std::size_t(width))) + 1);
    }
    const int row = height - 1 - line_no;
    for (int col = 0; col < width; ++col) {
      const char ch = line[static_cast<std::size_t>(col)];
      Tile t;
      switch (ch) {
        case '#': t = Tile::Wall; break;
        case '.': t = Tile::Free; free = true; break;
        case 'G': t = Tile::Goal; goal = true; break;
        default:
          throw ParseError(std::string("unknown tile character '") + ch + "'", line_no + 1, col + 1);
      }
      tiles[static_cast<std::size_t>(row * width + col)] = t;
    }
  }
  if (!goal) throw ParseError("maze has no goal tile", 1, 1);
  if (!free) throw ParseError("maze has no free tile", 1, 1);
  return MazeSpec(std::move(name), width, height, std::move(tiles));
}

MazeSpec load_maze_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open maze file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return load_maze(buf.str(), path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
  }
}

void DynamicSchedule::validate() const {
  if (states.empty()) throw ConfigError("schedule has no maze states");
  if (period <= 0) throw ConfigError("schedule period must be positive");
}

Eigen::Vector2d DynamicSchedule::extent() const {
  Eigen::Vector2d e = Eigen::Vector2d::Zero();
  for (const auto& m : states) {
    e.x() = std::max<double>(e.x(), m.width());
    e.y() = std::max<double>(e.y(), m.height());
  }
  return e;
}

void EnvConfig::validate() const {
  schedule.validate();
  if (!(noise_fraction >= 0 && noise_fraction < 0.5)) {
    throw ConfigError("noise_fraction must be in [0, 0.5)");
  }
  if (!(max_displacement > 0)) throw ConfigError("max_displacement must be positive");
  if (max_steps_per_trial <= 0) throw ConfigError("max_steps_per_trial must be positive");
}

Environment::Environment(EnvConfig config, Rng rng)
    : config_(std::move(config)), rng_(rng) {
  config_.validate();
  extent_ = config_.schedule.extent();
  active_ = config_.schedule.state_for_trial(0);
}

Eigen::Vector2d Environment::reset() {
  const MazeSpec& maze = active_maze();
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    const Eigen::Vector2d p(uniform<double>(rng_, 0.0, maze.width()),
                            uniform<double>(rng_, 0.0, maze.height()));
    if (maze.tile_at(p) == Tile::Free) {
      position_ = p;
      step_ = 0;
      done_ = false;
      return position_;
    }
  }
  throw ConfigError("maze " + maze.name() + " has no eligible start area");
}

void Environment::place(const Eigen::Vector2d& position) {
  const MazeSpec& maze = active_maze();
  if (!(position.x() >= 0 && position.x() <= maze.width() && position.y() >= 0 &&
        position.y() <= maze.height()) ||
      maze.strictly_in_wall(position)) {
    throw ContractViolation("Environment::place: position outside free space");
  }
  position_ = position;
  step_ = 0;
  done_ = false;
}

Transition Environment::step(const Eigen::Vector2d& action) {
  if (done_) throw ContractViolation("Environment::step: trial already finished");
  const MazeSpec& maze = active_maze();
  const double cap = config_.max_displacement;
  const Eigen::Vector2d move = action.cwiseMax(-cap).cwiseMin(cap);
  const Eigen::Vector2d target(std::clamp(position_.x() + move.x(), 0.0, double(maze.width())),
                               std::clamp(position_.y() + move.y(), 0.0, double(maze.height())));
  ++step_;
  Transition t{position_, config_.reward_step, false, false};
  if (maze.strictly_in_wall(target)) {
    t.reward = config_.reward_collision;
    t.collided = true;
  } else if (maze.tile_at(target) == Tile::Goal) {
    position_ = target;
    t.reward = config_.reward_goal;
    t.done = true;
  } else {
    position_ = target;
  }
  if (step_ >= config_.max_steps_per_trial) t.done = true;
  t.position = position_;
  done_ = t.done;
  return t;
}

Eigen::Vector2d Environment::observe() {
  Eigen::Vector2d o = normalize_position(position_, extent_);
  const double n = config_.noise_fraction;
  if (n > 0) {
    for (int i = 0; i < 2; ++i) o[i] = std::clamp(o[i] + uniform<double>(rng_, -n, n), 0.0, 1.0);
  }
  return o;
}

void Environment::advance_trial() {
  ++trial_;
  active_ = config_.schedule.state_for_trial(trial_);
  done_ = true;
}

}  // namespace soc
