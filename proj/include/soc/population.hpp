#pragma once

// The SOM population: a classifier store indexed by per-cell best/novel
// groups. Fitness lives on the (cell, slot) pair, never on the classifier.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "soc/rng.hpp"
#include "soc/som.hpp"

namespace soc {

using ClassifierId = std::uint64_t;
using Genes = Eigen::Vector2d;
using Observation = Eigen::Vector2d;
using Grid = SomGrid<double, 2>;

enum class Group { Best, Novel };
enum class ActivationMode { Explore, Exploit };

struct Classifier {
  ClassifierId id = 0;
  Genes genes = Genes::Zero();
  int numerosity = 0;
};

struct Slot {
  ClassifierId classifier = 0;
  double fitness = 0.0;
  std::uint64_t serial = 0;  // creation order, used for age tie-breaks
};

struct CellState {
  std::vector<Slot> best;
  std::vector<Slot> novel;
  std::uint64_t experience = 0;
  std::uint64_t generation = 0;  // number of evolution events applied to this cell
  bool initialized = false;

  std::vector<Slot>& group(Group g) { return g == Group::Best ? best : novel; }
  const std::vector<Slot>& group(Group g) const { return g == Group::Best ? best : novel; }
};

struct SocParams {
  int beta = 2;
  int nu = 5;
  double iota = 20.0;
  double eta = 0.2;
  double gamma = 0.90;
  double initial_fitness = 0.0;
  int init_neighborhood = 4;  // Chebyshev radius searched for a best-group donor
  bool max_includes_novel = true;

  int subpopulation_size() const noexcept { return beta + nu; }
  void validate() const;
};

/// Flat classifier array with O(1) uniform sampling over distinct classifiers.
class ClassifierStore {
 public:
  /// Inserts with numerosity 0; the caller must index it immediately.
  ClassifierId insert(const Genes& genes);
  void restore(const Classifier& c);

  bool contains(ClassifierId id) const { return slot_of_.count(id) != 0; }
  const Classifier& get(ClassifierId id) const;
  std::size_t size() const noexcept { return items_.size(); }
  const Classifier& at(std::size_t i) const { return items_[i]; }
  ClassifierId next_id() const noexcept { return next_id_; }
  void set_next_id(ClassifierId id) noexcept { next_id_ = id; }

  void increment(ClassifierId id);
  /// Returns true when the classifier reached zero and was erased.
  bool decrement(ClassifierId id);

  const std::vector<Classifier>& items() const noexcept { return items_; }

 private:
  void erase(ClassifierId id);

  std::vector<Classifier> items_;
  std::unordered_map<ClassifierId, std::size_t> slot_of_;
  ClassifierId next_id_ = 1;
};

struct Activation {
  int cell = 0;
  Group group = Group::Best;
  std::size_t slot = 0;
  Genes action = Genes::Zero();
};

class SocSystem {
 public:
  SocSystem(Grid grid, SocParams params, std::uint64_t seed);
  /// Fresh system with a randomly initialized lattice drawn from `seed`'s grid stream.
  static SocSystem create(int width, int height, SocParams params,
                          const SomParams<double>& som, std::uint64_t seed);

  const Grid& grid() const noexcept { return grid_; }
  Grid& grid() noexcept { return grid_; }
  const SocParams& params() const noexcept { return params_; }
  int cell_count() const noexcept { return grid_.cell_count(); }
  const CellState& cell(int index) const;
  CellState& cell(int index);
  const ClassifierStore& store() const noexcept { return store_; }

  void ensure_cell_initialized(int cell);
  Activation activate(const Observation& observation, ActivationMode mode);
  /// Read-only activation: winner and a random slot, without touching the
  /// lattice, experience, or lazy initialization. Empty if the winner is uninitialized.
  std::optional<Activation> peek(const Observation& observation, ActivationMode mode,
                                 Rng& rng) const;

  std::size_t add_index(int cell, Group group, ClassifierId id);
  void remove_slot(int cell, Group group, std::size_t slot);
  /// New classifier indexed once by (cell, group).
  ClassifierId add_classifier(int cell, Group group, const Genes& genes);

  Genes random_genes(Rng& rng) const;
  const Genes& genes_of(ClassifierId id) const { return store_.get(id).genes; }

  Rng& classifier_rng() noexcept { return classifier_rng_; }
  Rng& activation_rng() noexcept { return activation_rng_; }
  Rng& evolution_rng() noexcept { return evolution_rng_; }

  std::uint64_t dropped_updates() const noexcept { return dropped_updates_; }
  void count_dropped_update() noexcept { ++dropped_updates_; }

  // Raw state access for snapshots.
  std::uint64_t next_serial() const noexcept { return next_serial_; }
  void restore_state(std::vector<CellState> cells, ClassifierStore store,
                     std::uint64_t next_serial, std::uint64_t dropped_updates);
  const Rng& classifier_rng() const noexcept { return classifier_rng_; }
  const Rng& activation_rng() const noexcept { return activation_rng_; }
  const Rng& evolution_rng() const noexcept { return evolution_rng_; }
  void restore_rngs(Rng classifier, Rng activation, Rng evolution);

 private:
  std::optional<int> best_donor(int cell) const;

  Grid grid_;
  SocParams params_;
  std::vector<CellState> cells_;
  ClassifierStore store_;
  std::uint64_t next_serial_ = 0;
  std::uint64_t dropped_updates_ = 0;
  Rng classifier_rng_;
  Rng activation_rng_;
  Rng evolution_rng_;
};

/// Classifier ids whose numerosity disagrees with a full scan of every slot
/// (including ids referenced by slots but missing from the store).
std::vector<ClassifierId> numerosity_violations(const SocSystem& system);

}  // namespace soc
