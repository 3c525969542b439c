#include "soc/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "soc/config.hpp"
#include "soc/error.hpp"
#include "soc/snapshot.hpp"

namespace soc {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(10);
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};

}  // namespace

void write_trial_log(const std::filesystem::path& path, const std::vector<TrialRecord>& log) {
  auto out = open_out(path);
  out << "trial,steps,maze_state,exploit_trial,counted\n";
  for (const auto& r : log) {
    out << r.trial << ',' << r.steps << ',' << r.maze_state << ',' << (r.exploit_trial ? 1 : 0)
        << ',' << (r.counted ? 1 : 0) << '\n';
  }
  check_written(out, path);
}

void write_series(const std::filesystem::path& path, const PerformanceSeries& series) {
  auto out = open_out(path);
  out << "trial,steps,moving_average\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << series.trials()[i] << ',' << series.steps()[i] << ',' << series.moving_average()[i]
        << '\n';
  }
  check_written(out, path);
}

void write_curve(const std::filesystem::path& path, const std::vector<long>& trials,
                 const std::vector<double>& mean, const std::vector<double>& stddev) {
  auto out = open_out(path);
  out << "trial,mean,stddev\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    out << trials[i] << ',' << mean[i] << ',' << stddev[i] << '\n';
  }
  check_written(out, path);
}

void write_block_map(const std::filesystem::path& path, const BlockMap& map) {
  auto out = open_out(path);
  out << "block_x,block_y";
  for (const auto& c : map.channels) out << ',' << c;
  out << '\n';
  for (Eigen::Index row = 0; row < map.valid.rows(); ++row) {
    for (Eigen::Index col = 0; col < map.valid.cols(); ++col) {
      out << col << ',' << row;
      for (const auto& layer : map.layers) {
        out << ',';
        if (map.valid(row, col)) out << layer(row, col);
      }
      out << '\n';
    }
  }
  check_written(out, path);
}

void write_events(const std::filesystem::path& path, const std::vector<EvolutionReport>& events) {
  auto out = open_out(path);
  auto ids = [](const std::vector<ClassifierId>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
  };
  out << "event,cell,kept,discarded,indexed,created\n";
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    out << i << ',' << e.cell << ',' << ids(e.kept) << ',' << ids(e.discarded) << ','
        << ids(e.indexed) << ',' << ids(e.created) << '\n';
  }
  check_written(out, path);
}

void write_curve_svg(const std::filesystem::path& path, const std::vector<Curve>& curves,
                     const std::string& title) {
  constexpr double kW = 800, kH = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 40;
  long t_max = 1;
  double y_max = 1.0;
  for (const auto& c : curves) {
    if (!c.trials.empty()) t_max = std::max(t_max, c.trials.back());
    for (double v : c.values) y_max = std::max(y_max, v);
  }
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  auto x_of = [&](double t) { return kLeft + plot_w * t / static_cast<double>(t_max); };
  auto y_of = [&](double v) { return kTop + plot_h * (1.0 - v / y_max); };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kLeft - 5 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\">"
      << std::lround(y_max) << "</text>\n"
      << "<text x=\"" << kLeft - 5 << "\" y=\"" << kTop + plot_h << "\" text-anchor=\"end\">0</text>\n"
      << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kH - 15
      << "\" text-anchor=\"end\">" << t_max << " trials</text>\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    // Thin long series so the file stays small.
    const std::size_t stride = std::max<std::size_t>(1, c.trials.size() / 2000);
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[k % std::size(kPalette)]
        << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < c.trials.size(); i += stride) {
      out << x_of(static_cast<double>(c.trials[i])) << ',' << y_of(c.values[i]) << ' ';
    }
    out << "\"/>\n"
        << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 15 * (k + 1) << "\" fill=\""
        << kPalette[k % std::size(kPalette)] << "\">" << c.label << "</text>\n";
  }
  out << "</svg>\n";
  check_written(out, path);
}

void write_map_svg(const std::filesystem::path& path, const MazeSpec& maze, const BlockMap& map,
                   const std::string& title) {
  constexpr double kCell = 30, kTop = 30;
  const double w = maze.width() * kCell;
  const double h = maze.height() * kCell;
  const bool arrows = map.layers.size() == 2;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  if (!arrows) {
    for (Eigen::Index r = 0; r < map.valid.rows(); ++r) {
      for (Eigen::Index c = 0; c < map.valid.cols(); ++c) {
        if (!map.valid(r, c)) continue;
        lo = std::min(lo, map.layers[0](r, c));
        hi = std::max(hi, map.layers[0](r, c));
      }
    }
  }
  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h + kTop
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
  for (int row = 0; row < maze.height(); ++row) {
    for (int col = 0; col < maze.width(); ++col) {
      const double x = col * kCell;
      const double y = kTop + (maze.height() - 1 - row) * kCell;
      const Tile t = maze.tile(col, row);
      std::string fill = t == Tile::Wall ? "#333333" : t == Tile::Goal ? "#ffd700" : "#ffffff";
      if (!arrows && t != Tile::Wall && map.valid(row, col) && hi > lo) {
        const int shade = static_cast<int>(255.0 * (map.layers[0](row, col) - lo) / (hi - lo));
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", shade, 64, 255 - shade);
        fill = buf;
      }
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\""
          << kCell << "\" fill=\"" << fill << "\" stroke=\"#cccccc\"/>\n";
      if (arrows && t != Tile::Wall && map.valid(row, col)) {
        const double cx = x + kCell / 2;
        const double cy = y + kCell / 2;
        const double dx = map.layers[0](row, col) * kCell * 0.45;
        const double dy = -map.layers[1](row, col) * kCell * 0.45;
        out << "<line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << cx + dx << "\" y2=\""
            << cy + dy << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n"
            << "<circle cx=\"" << cx + dx << "\" cy=\"" << cy + dy
            << "\" r=\"2\" fill=\"#d62728\"/>\n";
      }
    }
  }
  out << "</svg>\n";
  check_written(out, path);
}

void write_run_outputs(const std::filesystem::path& dir, const ExperimentConfig& config,
                       const ReplicateSummary& summary) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

  {
    auto out = open_out(dir / "config.txt");
    out << format_config(config);
    check_written(out, dir / "config.txt");
  }
  write_curve(dir / "curve.csv", summary.trials, summary.mean, summary.stddev);
  write_curve_svg(dir / "curve.svg", {{to_string(config.algorithm), summary.trials, summary.mean}},
                  "Steps to goal, trailing 100-trial mean over " +
                      std::to_string(summary.runs.size()) + " replicates");

  const Eigen::Vector2d extent = config.env.schedule.extent();
  for (std::size_t i = 0; i < summary.runs.size(); ++i) {
    const auto& run = summary.runs[i];
    char name[32];
    std::snprintf(name, sizeof name, "replicate_%03zu", i);
    const auto sub = dir / name;
    std::filesystem::create_directories(sub, ec);
    if (ec) throw IoError("cannot create directory " + sub.string() + ": " + ec.message());
    write_trial_log(sub / "trials.csv", run.log);
    write_series(sub / "performance.csv", run.performance);
    save_snapshot(sub / "snapshot.txt", run.system, extent);
    if (config.diagnostics) write_events(sub / "events.csv", run.evolution_events);
  }

  const auto& first = summary.runs.front();
  const auto& states = config.env.schedule.states;
  const int final_state = config.env.schedule.state_for_trial(config.total_trials - 1);
  const MazeSpec& maze = states[static_cast<std::size_t>(final_state)];
  Rng rng = make_stream(first.seed, Stream::Sampling);
  const BlockMap behavior = sample_behavior_map(first.system, maze, extent, rng);
  const BlockMap fitness = sample_fitness_map(first.system, maze, extent, rng);
  write_block_map(dir / "behavior_map.csv", behavior);
  write_block_map(dir / "fitness_map.csv", fitness);
  write_map_svg(dir / "behavior_map.svg", maze, behavior, "Behavior, replicate 0");
  write_map_svg(dir / "fitness_map.svg", maze, fitness, "Fitness, replicate 0");

  auto out = open_out(dir / "summary.txt");
  out << std::setprecision(17);
  out << "replicates = " << summary.runs.size() << '\n'
      << "mean_final_performance = " << summary.mean_final_performance() << '\n';
  const auto finals = summary.final_performances();
  for (std::size_t i = 0; i < finals.size(); ++i) {
    out << "final_performance_" << i << " = " << finals[i] << '\n';
  }
  for (std::size_t i = 0; i < summary.runs.size(); ++i) {
    out << "dropped_updates_" << i << " = " << summary.runs[i].dropped_updates << '\n';
  }
  check_written(out, dir / "summary.txt");
}

Curve read_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Curve c;
  c.label = path.parent_path().filename().string();
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    long t;
    char comma;
    double mean;
    if (!(row >> t >> comma >> mean)) throw IoError("malformed curve row in " + path.string());
    c.trials.push_back(t);
    c.values.push_back(mean);
  }
  return c;
}

std::vector<double> read_final_performances(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "summary.txt";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::pair<int, double>> found;
  std::string line;
  const std::string prefix = "final_performance_";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) != 0) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("malformed line in " + path.string());
    found.emplace_back(std::stoi(line.substr(prefix.size(), eq - prefix.size())),
                       std::stod(line.substr(eq + 1)));
  }
  std::sort(found.begin(), found.end());
  std::vector<double> out;
  for (const auto& [i, v] : found) out.push_back(v);
  return out;
}

}  // namespace soc
