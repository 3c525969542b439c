#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace soc {

using Rng = std::mt19937_64;

// Named substreams derived from one master seed. Each consumer owns its own
// stream so that adding draws in one place never shifts another.
enum class Stream : std::uint32_t {
  Grid = 1,
  Classifiers = 2,
  Activation = 3,
  Evolution = 4,
  Environment = 5,
  Sampling = 6,
};

inline Rng make_stream(std::uint64_t master_seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

template <typename Scalar>
Scalar uniform(Rng& rng, Scalar lo, Scalar hi) {
  return std::uniform_real_distribution<Scalar>(lo, hi)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool bernoulli(Rng& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

}  // namespace soc
