#include "soc/snapshot.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "soc/error.hpp"

namespace soc {

namespace {

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw IoError("snapshot: unexpected end of input");
    return w;
  }

  void expect(const std::string& tag) {
    const std::string w = word();
    if (w != tag) throw IoError("snapshot: expected '" + tag + "', found '" + w + "'");
  }

  double real() {
    const std::string w = word();
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size()) throw IoError("snapshot: bad real '" + w + "'");
    return v;
  }

  std::uint64_t count() {
    const std::string w = word();
    char* end = nullptr;
    const auto v = std::strtoull(w.c_str(), &end, 10);
    if (end != w.c_str() + w.size()) throw IoError("snapshot: bad integer '" + w + "'");
    return v;
  }

  int integer() { return static_cast<int>(count()); }

  Rng rng() {
    Rng r;
    if (!(in_ >> r)) throw IoError("snapshot: bad RNG state");
    return r;
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_snapshot(std::ostream& out, const SocSystem& system, const Eigen::Vector2d& extent) {
  const Grid& g = system.grid();
  const auto& sp = g.params();
  const auto& p = system.params();
  out << "soc-snapshot " << kSnapshotVersion << '\n';
  out << "extent " << hex(extent.x()) << ' ' << hex(extent.y()) << '\n';
  out << "som " << g.width() << ' ' << g.height() << ' '
      << (sp.mode == SomMode::Parameterless ? "parameterless" : "classic") << ' ' << g.iteration()
      << ' ' << hex(g.max_error()) << ' ' << hex(sp.theta_min) << ' ' << hex(sp.theta_max) << ' '
      << hex(sp.cell_update_threshold) << ' ' << hex(sp.classic_rate_scale) << ' '
      << hex(sp.classic_rate_decay) << '\n';
  out << "params " << p.beta << ' ' << p.nu << ' ' << hex(p.iota) << ' ' << hex(p.eta) << ' '
      << hex(p.gamma) << ' ' << hex(p.initial_fitness) << ' ' << p.init_neighborhood << ' '
      << (p.max_includes_novel ? 1 : 0) << '\n';
  out << "weights\n";
  for (int c = 0; c < g.cell_count(); ++c) {
    out << hex(g.weights()(0, c)) << ' ' << hex(g.weights()(1, c)) << '\n';
  }
  const auto& store = system.store();
  out << "store " << store.size() << ' ' << store.next_id() << '\n';
  for (const Classifier& c : store.items()) {
    out << c.id << ' ' << c.numerosity << ' ' << hex(c.genes.x()) << ' ' << hex(c.genes.y())
        << '\n';
  }
  out << "cells\n";
  for (int i = 0; i < system.cell_count(); ++i) {
    const CellState& c = system.cell(i);
    out << (c.initialized ? 1 : 0) << ' ' << c.experience << ' ' << c.generation << ' '
        << c.best.size() << ' ' << c.novel.size();
    for (const auto* group : {&c.best, &c.novel}) {
      for (const Slot& s : *group) out << ' ' << s.classifier << ' ' << hex(s.fitness) << ' ' << s.serial;
    }
    out << '\n';
  }
  out << "counters " << system.next_serial() << ' ' << system.dropped_updates() << '\n';
  out << "rng " << system.classifier_rng() << '\n'
      << "rng " << system.activation_rng() << '\n'
      << "rng " << system.evolution_rng() << '\n';
  out << "end\n";
}

Snapshot read_snapshot(std::istream& in) {
  Reader r(in);
  r.expect("soc-snapshot");
  if (const int version = r.integer(); version != kSnapshotVersion) {
    throw IoError("snapshot: unsupported version " + std::to_string(version));
  }
  r.expect("extent");
  Eigen::Vector2d extent;
  extent.x() = r.real();
  extent.y() = r.real();

  r.expect("som");
  const int width = r.integer();
  const int height = r.integer();
  SomParams<double> sp;
  const std::string mode = r.word();
  if (mode == "parameterless") {
    sp.mode = SomMode::Parameterless;
  } else if (mode == "classic") {
    sp.mode = SomMode::Classic;
  } else {
    throw IoError("snapshot: unknown som mode '" + mode + "'");
  }
  const std::uint64_t iteration = r.count();
  const double max_error = r.real();
  sp.theta_min = r.real();
  sp.theta_max = r.real();
  sp.cell_update_threshold = r.real();
  sp.classic_rate_scale = r.real();
  sp.classic_rate_decay = r.real();

  r.expect("params");
  SocParams p;
  p.beta = r.integer();
  p.nu = r.integer();
  p.iota = r.real();
  p.eta = r.real();
  p.gamma = r.real();
  p.initial_fitness = r.real();
  p.init_neighborhood = r.integer();
  p.max_includes_novel = r.integer() != 0;

  if (width <= 0 || height <= 0 || width > 100000 || height > 100000) {
    throw IoError("snapshot: bad lattice size");
  }
  r.expect("weights");
  Grid::Weights w(2, static_cast<Eigen::Index>(width) * height);
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    w(0, c) = r.real();
    w(1, c) = r.real();
  }

  r.expect("store");
  const auto n_store = r.count();
  ClassifierStore store;
  const auto next_id = r.count();
  for (std::uint64_t i = 0; i < n_store; ++i) {
    Classifier c;
    c.id = r.count();
    c.numerosity = r.integer();
    c.genes.x() = r.real();
    c.genes.y() = r.real();
    store.restore(c);
  }
  store.set_next_id(next_id);

  r.expect("cells");
  std::vector<CellState> cells(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (CellState& c : cells) {
    c.initialized = r.integer() != 0;
    c.experience = r.count();
    c.generation = r.count();
    const auto n_best = r.count();
    const auto n_novel = r.count();
    for (auto [group, n] : {std::pair{&c.best, n_best}, std::pair{&c.novel, n_novel}}) {
      for (std::uint64_t k = 0; k < n; ++k) {
        Slot s;
        s.classifier = r.count();
        s.fitness = r.real();
        s.serial = r.count();
        group->push_back(s);
      }
    }
  }
  r.expect("counters");
  const auto next_serial = r.count();
  const auto dropped = r.count();
  r.expect("rng");
  Rng classifier = r.rng();
  r.expect("rng");
  Rng activation = r.rng();
  r.expect("rng");
  Rng evolution = r.rng();
  r.expect("end");

  SocSystem system(Grid(width, height, std::move(w), sp, iteration, max_error), p, 0);
  system.restore_state(std::move(cells), std::move(store), next_serial, dropped);
  system.restore_rngs(classifier, activation, evolution);
  if (!numerosity_violations(system).empty()) {
    throw IoError("snapshot: numerosity does not match slot references");
  }
  return {std::move(system), extent};
}

void save_snapshot(const std::filesystem::path& path, const SocSystem& system,
                   const Eigen::Vector2d& extent) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write snapshot " + path.string());
  write_snapshot(out, system, extent);
  if (!out) throw IoError("failed writing snapshot " + path.string());
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open snapshot " + path.string());
  try {
    return read_snapshot(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace soc
