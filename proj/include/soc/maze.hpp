#pragma once

// Continuous-state, continuous-action mazes built from unit tiles.
//
// Coordinates are in maze units with the origin at the bottom-left corner;
// the first text row of a maze file is the top row of tiles.

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "soc/rng.hpp"

namespace soc {

enum class Tile : char { Wall = '#', Free = '.', Goal = 'G' };

class MazeSpec {
 public:
  MazeSpec(std::string name, int width, int height, std::vector<Tile> tiles);

  const std::string& name() const noexcept { return name_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  /// Tile at column `col` (from the left) and row `row` (from the bottom).
  Tile tile(int col, int row) const { return tiles_[static_cast<std::size_t>(row * width_ + col)]; }
  /// Tile containing a point; points on the far edges belong to the last tile.
  Tile tile_at(const Eigen::Vector2d& p) const;
  /// True when the point lies in the open interior of a wall tile.
  bool strictly_in_wall(const Eigen::Vector2d& p) const;

  std::string to_text() const;

 private:
  std::string name_;
  int width_;
  int height_;
  std::vector<Tile> tiles_;  // row-major, row 0 at the bottom
};

MazeSpec load_maze(std::string_view text, std::string name = "maze");
MazeSpec load_maze_file(const std::filesystem::path& path);

struct DynamicSchedule {
  std::vector<MazeSpec> states;
  int period = 10000;

  void validate() const;
  int state_for_trial(long trial_index) const {
    return static_cast<int>((trial_index / period) % static_cast<long>(states.size()));
  }
  /// Largest width and height over all states; observations are normalized by it.
  Eigen::Vector2d extent() const;
};

struct EnvConfig {
  DynamicSchedule schedule;
  double noise_fraction = 0.0;
  double reward_goal = 1000.0;
  double reward_collision = -20.0;
  double reward_step = -10.0;
  double max_displacement = 1.0;
  int max_steps_per_trial = 500;

  void validate() const;
};

struct Transition {
  Eigen::Vector2d position;
  double reward;
  bool done;
  bool collided;
};

class Environment {
 public:
  Environment(EnvConfig config, Rng rng);

  const EnvConfig& config() const noexcept { return config_; }
  const MazeSpec& active_maze() const { return config_.schedule.states[static_cast<std::size_t>(active_)]; }
  int active_state_index() const noexcept { return active_; }
  long trial_index() const noexcept { return trial_; }
  int step_index() const noexcept { return step_; }
  bool done() const noexcept { return done_; }
  const Eigen::Vector2d& position() const noexcept { return position_; }
  Eigen::Vector2d extent() const noexcept { return extent_; }

  Eigen::Vector2d reset();
  /// Places the agent at an explicit start; the point must not be in a wall.
  void place(const Eigen::Vector2d& position);
  Transition step(const Eigen::Vector2d& action);
  Eigen::Vector2d observe();
  void advance_trial();

 private:
  EnvConfig config_;
  Rng rng_;
  Eigen::Vector2d extent_;
  Eigen::Vector2d position_ = Eigen::Vector2d::Zero();
  long trial_ = 0;
  int step_ = 0;
  int active_ = 0;
  bool done_ = true;
};

/// Normalized observation of a position with no noise.
inline Eigen::Vector2d normalize_position(const Eigen::Vector2d& p, const Eigen::Vector2d& extent) {
  return p.cwiseQuotient(extent);
}

}  // namespace soc
