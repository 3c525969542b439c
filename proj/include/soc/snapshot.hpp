#pragma once

// Versioned text dump of a full SocSystem (lattice, cells, store, RNG
// streams). Reals are written as hex floats so a reload is bit-exact.

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>

#include "soc/population.hpp"

namespace soc {

inline constexpr int kSnapshotVersion = 1;

struct Snapshot {
  SocSystem system;
  Eigen::Vector2d extent;  // observation normalization used while training
};

void write_snapshot(std::ostream& out, const SocSystem& system, const Eigen::Vector2d& extent);
Snapshot read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const SocSystem& system,
                   const Eigen::Vector2d& extent);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace soc
