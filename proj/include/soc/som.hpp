#pragma once

// Self-organizing map lattice used as the population structure.
//
// Two update rules are provided:
//  * Parameterless: the learning rate is the winner's error relative to the
//    largest winner error seen so far, and the neighborhood width scales with it.
//  * Classic: an exponentially decaying learning rate with a fixed unit-width
//    Gaussian neighborhood.
// Both share the same lattice metric (Chebyshev) and the same update gate.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>

#include "soc/error.hpp"
#include "soc/rng.hpp"

namespace soc {

enum class SomMode { Parameterless, Classic };

/// How theta_max is derived from the lattice size. `Area` (width * height)
/// makes the neighborhood span the whole lattice for all but tiny learning
/// rates, which contracts the map onto recent inputs; `Side` uses the longer
/// lattice side; `Fixed` takes an explicit value.
enum class ThetaMaxRule { Area, Side, Fixed };

template <typename Scalar>
struct SomParams {
  Scalar theta_min = Scalar(1);
  Scalar theta_max = Scalar(100);
  Scalar cell_update_threshold = Scalar(0.005);
  Scalar classic_rate_scale = Scalar(0.1);
  Scalar classic_rate_decay = Scalar(0.999999);
  SomMode mode = SomMode::Parameterless;

  /// Defaults with theta_max derived from the lattice size.
  static SomParams for_grid(int width, int height, SomMode mode = SomMode::Parameterless,
                            ThetaMaxRule rule = ThetaMaxRule::Area,
                            Scalar fixed_theta_max = Scalar(1)) {
    SomParams p;
    switch (rule) {
      case ThetaMaxRule::Area:
        p.theta_max = static_cast<Scalar>(width) * static_cast<Scalar>(height);
        break;
      case ThetaMaxRule::Side:
        p.theta_max = static_cast<Scalar>(std::max(width, height));
        break;
      case ThetaMaxRule::Fixed:
        p.theta_max = fixed_theta_max;
        break;
    }
    p.theta_max = std::max(p.theta_max, p.theta_min);
    p.mode = mode;
    return p;
  }

  void validate() const {
    if (!(theta_min <= theta_max)) throw ContractViolation("SomParams: theta_min > theta_max");
    if (!(cell_update_threshold > 0)) {
      throw ContractViolation("SomParams: cell_update_threshold must be positive");
    }
  }
};

template <typename Scalar>
struct PlsomRate {
  Scalar epsilon;
  Scalar max_error;
};

inline int chebyshev_distance(int col_a, int row_a, int col_b, int row_b) {
  return std::max(std::abs(col_a - col_b), std::abs(row_a - row_b));
}

template <typename Scalar, int Dim = 2>
class SomGrid {
 public:
  using Vector = Eigen::Matrix<Scalar, Dim, 1>;
  using Weights = Eigen::Matrix<Scalar, Dim, Eigen::Dynamic>;

  SomGrid(int width, int height, Weights weights, SomParams<Scalar> params,
          std::uint64_t iteration = 0, Scalar max_error = Scalar(0))
      : width_(width),
        height_(height),
        weights_(std::move(weights)),
        params_(params),
        iteration_(iteration),
        max_error_(max_error) {
    if (width <= 0 || height <= 0) throw ContractViolation("SomGrid: non-positive lattice size");
    if (weights_.cols() != static_cast<Eigen::Index>(width) * height) {
      throw ContractViolation("SomGrid: weight count does not match lattice size");
    }
    if (!weights_.allFinite()) throw ContractViolation("SomGrid: non-finite weight");
    params_.validate();
  }

  /// Lattice with every weight component drawn uniformly from [0,1].
  static SomGrid random(int width, int height, SomParams<Scalar> params, Rng& rng,
                        int dim = Dim == Eigen::Dynamic ? 2 : Dim) {
    if (width <= 0 || height <= 0) throw ContractViolation("SomGrid: non-positive lattice size");
    Weights w(dim, static_cast<Eigen::Index>(width) * height);
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = uniform<Scalar>(rng, 0, 1);
    }
    return SomGrid(width, height, std::move(w), params);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int cell_count() const noexcept { return width_ * height_; }
  int dim() const noexcept { return static_cast<int>(weights_.rows()); }
  int col_of(int cell) const noexcept { return cell % width_; }
  int row_of(int cell) const noexcept { return cell / width_; }
  int index_of(int col, int row) const noexcept { return row * width_ + col; }

  const Weights& weights() const noexcept { return weights_; }
  auto weight(int cell) const { return weights_.col(cell); }
  const SomParams<Scalar>& params() const noexcept { return params_; }
  std::uint64_t iteration() const noexcept { return iteration_; }
  Scalar max_error() const noexcept { return max_error_; }

  int lattice_distance(int a, int b) const noexcept {
    return chebyshev_distance(col_of(a), row_of(a), col_of(b), row_of(b));
  }

  /// Cell whose weight is closest (Euclidean) to the input; lowest index on ties.
  int find_winner(const Vector& input) const {
    check_input(input);
    Eigen::Index best = 0;
    (weights_.colwise() - input).colwise().squaredNorm().minCoeff(&best);
    return static_cast<int>(best);
  }

  PlsomRate<Scalar> plsom_learning_rate(const Vector& input, int winner) const {
    const Scalar error = (input - weights_.col(winner)).norm();
    const Scalar r = std::max(error, max_error_);
    return {r > 0 ? error / r : Scalar(0), r};
  }

  Scalar classic_learning_rate() const {
    return params_.classic_rate_scale *
           std::pow(params_.classic_rate_decay, static_cast<Scalar>(iteration_));
  }

  /// One training step on the input. Returns the winner selected before the
  /// weights moved.
  int update(const Vector& input) {
    const int winner = find_winner(input);
    Scalar epsilon;
    Scalar theta;
    if (params_.mode == SomMode::Parameterless) {
      const auto rate = plsom_learning_rate(input, winner);
      max_error_ = rate.max_error;
      epsilon = rate.epsilon;
      theta = std::max(epsilon * params_.theta_max, params_.theta_min);
    } else {
      epsilon = classic_learning_rate();
      theta = Scalar(1);
    }
    apply(input, winner, epsilon, theta);
    ++iteration_;
    return winner;
  }

  /// Neighborhood weight for a cell at lattice distance `dist` with width `theta`.
  static Scalar neighborhood(int dist, Scalar theta) {
    const Scalar d = static_cast<Scalar>(dist);
    return std::exp(-(d * d) / (theta * theta));
  }

 private:
  void check_input(const Vector& input) const {
    if (input.rows() != weights_.rows()) {
      throw ContractViolation("SomGrid: input dimension " + std::to_string(input.rows()) +
                              " does not match weight dimension " +
                              std::to_string(weights_.rows()));
    }
    if (!input.allFinite()) throw ContractViolation("SomGrid: non-finite input");
  }

  void apply(const Vector& input, int winner, Scalar epsilon, Scalar theta) {
    const Scalar threshold = params_.cell_update_threshold;
    if (!(epsilon > threshold)) return;  // h <= 1, so no cell can pass the gate
    // Cells beyond this radius cannot pass the gate; scanning one ring further
    // keeps rounding at the boundary on the exact per-cell test.
    const Scalar radius_sq = -theta * theta * std::log(threshold / epsilon);
    const int radius = static_cast<int>(std::min<Scalar>(
                           std::sqrt(radius_sq), static_cast<Scalar>(std::max(width_, height_)))) +
                       1;
    const int wc = col_of(winner);
    const int wr = row_of(winner);
    for (int row = std::max(0, wr - radius); row <= std::min(height_ - 1, wr + radius); ++row) {
      for (int col = std::max(0, wc - radius); col <= std::min(width_ - 1, wc + radius); ++col) {
        const Scalar step =
            epsilon * neighborhood(chebyshev_distance(col, row, wc, wr), theta);
        if (step > threshold) {
          // Convex form: a full step lands exactly on the input.
          auto w = weights_.col(index_of(col, row));
          w = (Scalar(1) - step) * w + step * input;
        }
      }
    }
  }

  int width_;
  int height_;
  Weights weights_;
  SomParams<Scalar> params_;
  std::uint64_t iteration_;
  Scalar max_error_;
};

}  // namespace soc
