#include "soc/population.hpp"

#include <map>
#include <string>

namespace soc {

void SocParams::validate() const {
  if (beta < 1 || nu < 1) throw ContractViolation("SocParams: beta and nu must be positive");
  if (!(eta > 0 && eta <= 1)) throw ContractViolation("SocParams: eta must be in (0,1]");
  if (!(gamma >= 0 && gamma < 1)) throw ContractViolation("SocParams: gamma must be in [0,1)");
  if (!(iota >= 0)) throw ContractViolation("SocParams: iota must be non-negative");
  if (init_neighborhood < 0) throw ContractViolation("SocParams: negative init neighborhood");
}

ClassifierId ClassifierStore::insert(const Genes& genes) {
  const ClassifierId id = next_id_++;
  slot_of_.emplace(id, items_.size());
  items_.push_back({id, genes, 0});
  return id;
}

void ClassifierStore::restore(const Classifier& c) {
  if (contains(c.id)) throw ContractViolation("ClassifierStore: duplicate id on restore");
  slot_of_.emplace(c.id, items_.size());
  items_.push_back(c);
  if (c.id >= next_id_) next_id_ = c.id + 1;
}

const Classifier& ClassifierStore::get(ClassifierId id) const {
  const auto it = slot_of_.find(id);
  if (it == slot_of_.end()) {
    throw ContractViolation("ClassifierStore: unknown classifier " + std::to_string(id));
  }
  return items_[it->second];
}

void ClassifierStore::increment(ClassifierId id) {
  const auto it = slot_of_.find(id);
  if (it == slot_of_.end()) {
    throw ContractViolation("ClassifierStore: unknown classifier " + std::to_string(id));
  }
  ++items_[it->second].numerosity;
}

bool ClassifierStore::decrement(ClassifierId id) {
  const auto it = slot_of_.find(id);
  if (it == slot_of_.end()) {
    throw ContractViolation("ClassifierStore: unknown classifier " + std::to_string(id));
  }
  if (--items_[it->second].numerosity > 0) return false;
  erase(id);
  return true;
}

void ClassifierStore::erase(ClassifierId id) {
  const std::size_t pos = slot_of_.at(id);
  const std::size_t last = items_.size() - 1;
  if (pos != last) {
    items_[pos] = items_[last];
    slot_of_[items_[pos].id] = pos;
  }
  items_.pop_back();
  slot_of_.erase(id);
}

SocSystem::SocSystem(Grid grid, SocParams params, std::uint64_t seed)
    : grid_(std::move(grid)),
      params_(params),
      cells_(static_cast<std::size_t>(grid_.cell_count())),
      classifier_rng_(make_stream(seed, Stream::Classifiers)),
      activation_rng_(make_stream(seed, Stream::Activation)),
      evolution_rng_(make_stream(seed, Stream::Evolution)) {
  params_.validate();
}

SocSystem SocSystem::create(int width, int height, SocParams params,
                            const SomParams<double>& som, std::uint64_t seed) {
  Rng grid_rng = make_stream(seed, Stream::Grid);
  return SocSystem(Grid::random(width, height, som, grid_rng), params, seed);
}

const CellState& SocSystem::cell(int index) const {
  if (index < 0 || index >= cell_count()) throw ContractViolation("SocSystem: cell out of range");
  return cells_[static_cast<std::size_t>(index)];
}

CellState& SocSystem::cell(int index) {
  if (index < 0 || index >= cell_count()) throw ContractViolation("SocSystem: cell out of range");
  return cells_[static_cast<std::size_t>(index)];
}

Genes SocSystem::random_genes(Rng& rng) const {
  Genes g;
  for (int i = 0; i < g.size(); ++i) g[i] = uniform<double>(rng, -1.0, 1.0);
  return g;
}

std::size_t SocSystem::add_index(int cell_index, Group group, ClassifierId id) {
  auto& slots = cell(cell_index).group(group);
  store_.increment(id);
  slots.push_back({id, params_.initial_fitness, next_serial_++});
  return slots.size() - 1;
}

ClassifierId SocSystem::add_classifier(int cell_index, Group group, const Genes& genes) {
  cell(cell_index);  // range check before mutating the store
  const ClassifierId id = store_.insert(genes);
  add_index(cell_index, group, id);
  return id;
}

void SocSystem::remove_slot(int cell_index, Group group, std::size_t slot) {
  auto& slots = cell(cell_index).group(group);
  if (slot >= slots.size()) {
    throw ContractViolation("SocSystem: removing nonexistent slot " + std::to_string(slot) +
                            " of cell " + std::to_string(cell_index));
  }
  const ClassifierId id = slots[slot].classifier;
  slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(slot));
  store_.decrement(id);
}

std::optional<int> SocSystem::best_donor(int target) const {
  const int radius = params_.init_neighborhood;
  const int tc = grid_.col_of(target);
  const int tr = grid_.row_of(target);
  std::optional<int> donor;
  double best_score = 0.0;
  for (int row = std::max(0, tr - radius); row <= std::min(grid_.height() - 1, tr + radius);
       ++row) {
    for (int col = std::max(0, tc - radius); col <= std::min(grid_.width() - 1, tc + radius);
         ++col) {
      const int idx = grid_.index_of(col, row);
      if (idx == target) continue;
      const CellState& c = cells_[static_cast<std::size_t>(idx)];
      if (!c.initialized || c.experience == 0) continue;
      const double d = chebyshev_distance(col, row, tc, tr);
      const double score = static_cast<double>(c.experience) / (d * d);
      if (!donor || score > best_score) {
        donor = idx;
        best_score = score;
      }
    }
  }
  return donor;
}

void SocSystem::ensure_cell_initialized(int index) {
  if (cell(index).initialized) return;
  for (int i = 0; i < params_.nu; ++i) {
    add_classifier(index, Group::Novel, random_genes(classifier_rng_));
  }
  if (const auto donor = best_donor(index)) {
    for (const Slot& s : cells_[static_cast<std::size_t>(*donor)].best) {
      add_index(index, Group::Best, s.classifier);
    }
  } else {
    for (int i = 0; i < params_.beta; ++i) {
      add_classifier(index, Group::Best, random_genes(classifier_rng_));
    }
  }
  cell(index).initialized = true;
}

Activation SocSystem::activate(const Observation& observation, ActivationMode mode) {
  const int winner = grid_.find_winner(observation);
  ensure_cell_initialized(winner);
  CellState& c = cells_[static_cast<std::size_t>(winner)];
  const Group group = mode == ActivationMode::Explore ? Group::Novel : Group::Best;
  const auto& slots = c.group(group);
  if (slots.empty()) throw ContractViolation("SocSystem: activating an empty group");
  const std::size_t slot = uniform_index(activation_rng_, slots.size());
  Activation a{winner, group, slot, store_.get(slots[slot].classifier).genes};
  grid_.update(observation);
  ++c.experience;
  return a;
}

std::optional<Activation> SocSystem::peek(const Observation& observation, ActivationMode mode,
                                          Rng& rng) const {
  const int winner = grid_.find_winner(observation);
  const CellState& c = cells_[static_cast<std::size_t>(winner)];
  if (!c.initialized) return std::nullopt;
  const Group group = mode == ActivationMode::Explore ? Group::Novel : Group::Best;
  const auto& slots = c.group(group);
  if (slots.empty()) return std::nullopt;
  const std::size_t slot = uniform_index(rng, slots.size());
  return Activation{winner, group, slot, store_.get(slots[slot].classifier).genes};
}

void SocSystem::restore_state(std::vector<CellState> cells, ClassifierStore store,
                              std::uint64_t next_serial, std::uint64_t dropped_updates) {
  if (cells.size() != cells_.size()) throw ContractViolation("SocSystem: cell count mismatch");
  cells_ = std::move(cells);
  store_ = std::move(store);
  next_serial_ = next_serial;
  dropped_updates_ = dropped_updates;
}

void SocSystem::restore_rngs(Rng classifier, Rng activation, Rng evolution) {
  classifier_rng_ = classifier;
  activation_rng_ = activation;
  evolution_rng_ = evolution;
}

std::vector<ClassifierId> numerosity_violations(const SocSystem& system) {
  std::map<ClassifierId, int> counted;
  for (int i = 0; i < system.cell_count(); ++i) {
    const CellState& c = system.cell(i);
    for (const Slot& s : c.best) ++counted[s.classifier];
    for (const Slot& s : c.novel) ++counted[s.classifier];
  }
  std::vector<ClassifierId> bad;
  for (const auto& [id, n] : counted) {
    if (!system.store().contains(id) || system.store().get(id).numerosity != n) bad.push_back(id);
  }
  for (const Classifier& c : system.store().items()) {
    if (counted.count(c.id) == 0) bad.push_back(c.id);
  }
  return bad;
}

}  // namespace soc
