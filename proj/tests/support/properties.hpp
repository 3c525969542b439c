#pragma once

// Training-free property checks. Each returns a verdict plus a short detail
// string; the unit tests assert on them and the acceptance binary prints them.

#include <cstdint>
#include <string>
#include <vector>

namespace soc::props {

struct Result {
  std::string name;
  bool passed = false;
  std::string detail;
};

Result winner_matches_brute_force(std::uint64_t seed, int instances = 1000);
Result plsom_rate_bounds(std::uint64_t seed, int updates = 5000);
Result first_update_lands_on_input(std::uint64_t seed, int instances = 200);
Result numerosity_audit(std::uint64_t seed, int operations = 10000);
Result niched_fitness_isolation(std::uint64_t seed, int trials = 200);
Result fitness_update_arithmetic(std::uint64_t seed, int tuples = 1000);
Result de_offspring_in_box(std::uint64_t seed, int draws = 10000);
Result de_mutant_arithmetic(std::uint64_t seed, int draws = 1000);
Result indexing_frequency(std::uint64_t seed, int evolution_calls = 10000);
Result rerun_bit_identical(std::uint64_t seed);

std::vector<Result> run_all(std::uint64_t seed);

}  // namespace soc::props
